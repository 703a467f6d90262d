//! Independent oracles shared by the integration suites. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use curvop::{CurvatureTensor, WeightClass};
use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Raw component lookup straight from the flat array.
pub fn raw(t: &CurvatureTensor, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let n = t.n();
    t.components()[i * n * n * n + j * n * n + k * n + l]
}

/// `Ric_{ij} = Σ_k R_{kikj}` by an explicit loop, row-major.
pub fn brute_ricci(t: &CurvatureTensor) -> Vec<f64> {
    let n = t.n();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += raw(t, k, i, k, j);
            }
            out[i * n + j] = acc;
        }
    }
    out
}

pub fn brute_scalar(t: &CurvatureTensor) -> f64 {
    let n = t.n();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += raw(t, k, i, k, i);
        }
    }
    acc
}

/// Max violation of the three symmetry families by a direct loop.
pub fn brute_symmetry_violation(t: &CurvatureTensor) -> f64 {
    let n = t.n();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let r = raw(t, i, j, k, l);
                    worst = worst
                        .max((r + raw(t, j, i, k, l)).abs())
                        .max((r + raw(t, i, j, l, k)).abs())
                        .max((r - raw(t, k, l, i, j)).abs())
                        .max((r + raw(t, i, k, l, j) + raw(t, i, l, j, k)).abs());
                }
            }
        }
    }
    worst
}

/// `Σ_{ijkl} R_{kijl} E_{kl} E_{ij}` with `E` row-major.
pub fn brute_bar_quad(t: &CurvatureTensor, e: &[f64]) -> f64 {
    let n = t.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    acc += raw(t, k, i, j, l) * e[k * n + l] * e[i * n + j];
                }
            }
        }
    }
    acc
}

/// Minimum of `Σ ω_i λ_i` over weights on the grid `{0, Ω/steps, …, Ω}` for
/// all but the last coordinate, which takes the remaining mass if it lies in `[0, Ω]`.
pub fn grid_min(lambda: &[f64], highest: f64, total: f64, steps: usize) -> f64 {
    fn rec(lambda: &[f64], highest: f64, steps: usize, left: f64, acc: f64, best: &mut f64) {
        if lambda.len() == 1 {
            if left >= -1e-12 && left <= highest + 1e-12 {
                *best = best.min(acc + left * lambda[0]);
            }
            return;
        }
        // Remaining coordinates can absorb at most (len - 1) * highest.
        let rest_cap = (lambda.len() - 1) as f64 * highest;
        for s in 0..=steps {
            let w = highest * s as f64 / steps as f64;
            if w > left + 1e-12 {
                break;
            }
            if left - w > rest_cap + 1e-12 {
                continue;
            }
            rec(&lambda[1..], highest, steps, left - w, acc + w * lambda[0], best);
        }
    }
    let mut best = f64::INFINITY;
    rec(lambda, highest, steps, total, 0.0, &mut best);
    best
}

/// Random admissible weight vector: Dirichlet(1, …, 1) scaled to `S`, then
/// clipped to `[0, Ω]` with the excess redistributed over unsaturated slots.
pub fn sample_weights<R: Rng + ?Sized>(rng: &mut R, len: usize, class: &WeightClass) -> Vec<f64> {
    let (highest, total) = (class.highest(), class.total());
    let raw: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let sum: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / sum * total).collect();
    for _ in 0..(len + 1) {
        let excess: f64 = w.iter().map(|x| (x - highest).max(0.0)).sum();
        for x in w.iter_mut() {
            *x = x.min(highest);
        }
        if excess <= 0.0 {
            break;
        }
        let room: f64 = w.iter().map(|x| highest - x).sum();
        if room <= 0.0 {
            break;
        }
        for x in w.iter_mut() {
            *x += excess * (highest - *x) / room;
        }
    }
    w
}

/// Random spectrum (ascending) with entries in `[-5, 5]`.
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Random admissible class for spectra of length `len`, with `1 ≤ S/Ω ≤ len`.
/// Roughly one in five classes has an integral ratio.
pub fn random_class<R: Rng + ?Sized>(rng: &mut R, len: usize) -> WeightClass {
    let highest = rng.random_range(0.1..3.0);
    let ratio =
        if rng.random_bool(0.2) { rng.random_range(1..=len) as f64 } else { rng.random_range(1.0..=len as f64) };
    WeightClass::new(highest, ratio * highest).unwrap()
}

pub fn sphere_spectrum_len(n: usize) -> usize {
    (n - 1) * (n + 2) / 2
}
