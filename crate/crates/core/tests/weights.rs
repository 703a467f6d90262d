mod common;

use common::{grid_min, random_class, random_spectrum, sample_weights};
use curvop::random::rng_from_seed;
use curvop::weights::{greedy_weights, nonneg_implies_bound};
use curvop::{bound_for_m, greedy_min, k_sum, Spectrum, WeightClass};
use proptest::prelude::*;
use rand::Rng;

fn dot(w: &[f64], l: &[f64]) -> f64 {
    w.iter().zip(l).map(|(a, b)| a * b).sum()
}

#[test]
fn sampled_weights_never_beat_the_greedy_minimum() {
    let mut rng = rng_from_seed(21);
    for _ in 0..200 {
        let len = rng.random_range(2..=14);
        let lambda = random_spectrum(&mut rng, len);
        let spec = Spectrum::new(lambda.clone());
        for _ in 0..20 {
            let class = random_class(&mut rng, len);
            let g = greedy_min(&spec, &class).unwrap();
            let w = sample_weights(&mut rng, len, &class);
            assert!(w.iter().all(|x| *x >= -1e-12 && *x <= class.highest() + 1e-12));
            assert!((w.iter().sum::<f64>() - class.total()).abs() <= 1e-9 * class.total());
            assert!(dot(&w, &lambda) >= g - 1e-9);
        }
    }
}

#[test]
fn greedy_weights_attain_the_minimum() {
    let mut rng = rng_from_seed(22);
    for _ in 0..500 {
        let len = rng.random_range(1..=20);
        let lambda = random_spectrum(&mut rng, len);
        let class = random_class(&mut rng, len);
        let w = greedy_weights(len, &class).unwrap();
        let g = greedy_min(&Spectrum::new(lambda.clone()), &class).unwrap();
        assert!((dot(&w, &lambda) - g).abs() <= 1e-12 * g.abs().max(1.0));
    }
}

#[test]
fn grid_search_agrees_on_small_spectra() {
    let mut rng = rng_from_seed(23);
    for _ in 0..100 {
        let len = rng.random_range(2..=4);
        let lambda = random_spectrum(&mut rng, len);
        let class = random_class(&mut rng, len);
        let g = greedy_min(&Spectrum::new(lambda.clone()), &class).unwrap();
        let grid = grid_min(&lambda, class.highest(), class.total(), 50);
        if grid.is_finite() {
            assert!(grid >= g - 1e-9);
        }
    }
}

#[test]
fn greedy_minimum_is_subadditive_over_classes() {
    let mut rng = rng_from_seed(24);
    for _ in 0..1000 {
        let len = rng.random_range(2..=15);
        let spec = Spectrum::new(random_spectrum(&mut rng, len));
        let a = random_class(&mut rng, len);
        let b = random_class(&mut rng, len);
        let sum = a.add(&b);
        let lhs = greedy_min(&spec, &sum).unwrap();
        let rhs = greedy_min(&spec, &a).unwrap() + greedy_min(&spec, &b).unwrap();
        // w1 + w2 is admissible for the sum, so its minimum can only be lower.
        assert!(lhs <= rhs + 1e-10 * (1.0 + rhs.abs()));
    }
}

#[test]
fn greedy_minimum_is_a_scaled_k_sum() {
    let mut rng = rng_from_seed(25);
    for _ in 0..1000 {
        let len = rng.random_range(1..=15);
        let spec = Spectrum::new(random_spectrum(&mut rng, len));
        let class = random_class(&mut rng, len);
        let g = greedy_min(&spec, &class).unwrap();
        let k = class.highest() * k_sum(&spec, class.ratio()).unwrap();
        assert!((g - k).abs() <= 1e-12 * g.abs().max(1.0));
    }
}

#[test]
fn every_choice_of_m_gives_a_lower_bound() {
    let mut rng = rng_from_seed(26);
    for _ in 0..1000 {
        let len = rng.random_range(2..=15);
        let spec = Spectrum::new(random_spectrum(&mut rng, len));
        let class = random_class(&mut rng, len);
        let g = greedy_min(&spec, &class).unwrap();
        let mut best = (f64::NEG_INFINITY, 0);
        for m in 1..=len {
            if let Ok(b) = bound_for_m(&spec, &class, m) {
                assert!(b <= g + 1e-12 * g.abs().max(1.0));
                if b > best.0 {
                    best = (b, m);
                }
            }
        }
        let floor = (class.ratio() + 1e-12).floor() as usize;
        if floor >= 1 && floor <= len {
            let at_floor = bound_for_m(&spec, &class, floor).unwrap();
            assert!((at_floor - best.0).abs() <= 1e-12 * g.abs().max(1.0));
        }
    }
}

#[test]
fn nonnegative_spectra_satisfy_the_implication() {
    let mut rng = rng_from_seed(27);
    for _ in 0..2000 {
        let len = rng.random_range(1..=12);
        let mut lambda = random_spectrum(&mut rng, len);
        // Shift some spectra so the premise is borderline or true.
        let shift = rng.random_range(0.0..5.0);
        lambda.iter_mut().for_each(|x| *x += shift);
        let spec = Spectrum::new(lambda);
        let class = random_class(&mut rng, len);
        assert!(nonneg_implies_bound(&spec, &class).unwrap().holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn k_sum_per_unit_is_nondecreasing(values in prop::collection::vec(-10.0f64..10.0, 1..12), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let spec = Spectrum::new(values);
        let len = spec.len() as f64;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (k1, k2) = (1.0 + lo * (len - 1.0), 1.0 + hi * (len - 1.0));
        let s1 = k_sum(&spec, k1).unwrap() / k1;
        let s2 = k_sum(&spec, k2).unwrap() / k2;
        prop_assert!(s2 >= s1 - 1e-12);
    }

    #[test]
    fn class_scaling_scales_the_minimum(values in prop::collection::vec(-10.0f64..10.0, 2..12), scale in 0.1f64..10.0, r in 0.0f64..1.0) {
        let spec = Spectrum::new(values);
        let len = spec.len() as f64;
        let class = WeightClass::new(1.0, 1.0 + r * (len - 1.0)).unwrap();
        let g = greedy_min(&spec, &class).unwrap();
        let gs = greedy_min(&spec, &class.scale(scale).unwrap()).unwrap();
        prop_assert!((gs - scale * g).abs() <= 1e-12 * (scale * g).abs().max(1.0));
    }
}
