//! Weighted eigenvalue sums.
//!
//! A weight class `(Ω, S)` stands for every sum `Σ ω_i λ_i` with
//! `0 ≤ ω_i ≤ Ω` and `Σ ω_i = S`. Its minimum over the class is attained by
//! the greedy assignment: weight `Ω` on the `m = ⌊S/Ω⌋` smallest eigenvalues
//! and the remainder `S − mΩ` on the next one.
//!
//! Scaling and addition of classes follow `a·(Ω, S) = (aΩ, aS)` and
//! `(Ω₁, S₁) + (Ω₂, S₂) = (Ω₁ + Ω₂, S₁ + S₂)`. Adding is sound for lower
//! bounds because the greedy minimum of the sum class never exceeds the sum
//! of the two greedy minima.

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::operators::Spectrum;

/// Values of a k-sum within this (scaled) distance of zero are flagged as boundary cases.
pub const BOUNDARY_TOL: f64 = 1e-12;

const ADMISSIBLE_SLACK: f64 = 1e-12;

/// Highest weight `Ω` and total weight `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightClass {
    highest: f64,
    total: f64,
}

impl WeightClass {
    pub fn new(highest: f64, total: f64) -> Result<Self> {
        if !(highest.is_finite() && highest > 0.0) {
            return Err(CurvError::InvalidParameter(format!("highest weight must be positive, got {highest}")));
        }
        if !(total.is_finite() && total > 0.0) {
            return Err(CurvError::InvalidParameter(format!("total weight must be positive, got {total}")));
        }
        Ok(Self { highest, total })
    }

    pub fn highest(&self) -> f64 {
        self.highest
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `S / Ω`, the k at which k-nonnegativity makes the class nonnegative.
    pub fn ratio(&self) -> f64 {
        self.total / self.highest
    }

    pub fn scale(&self, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(CurvError::InvalidParameter(format!("class scale must be positive, got {a}")));
        }
        Ok(Self { highest: a * self.highest, total: a * self.total })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { highest: self.highest + other.highest, total: self.total + other.total }
    }

    /// Whether some weight vector of length `len` lies in the class (`S ≤ len · Ω`).
    pub fn is_admissible(&self, len: usize) -> bool {
        self.total <= len as f64 * self.highest * (1.0 + ADMISSIBLE_SLACK)
    }

    fn check_admissible(&self, len: usize) -> Result<()> {
        if len == 0 || !self.is_admissible(len) {
            return Err(CurvError::InadmissibleClass { highest: self.highest, total: self.total, len });
        }
        Ok(())
    }

    /// Number of eigenvalues receiving the full weight `Ω`, capped at `len`.
    fn saturated(&self, len: usize) -> usize {
        let m = self.ratio().floor();
        if m >= len as f64 {
            len
        } else {
            m as usize
        }
    }
}

fn spectrum_scale(lambda: &Spectrum) -> f64 {
    lambda.values().iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

fn check_k(len: usize, k: f64) -> Result<f64> {
    let max = len as f64;
    if !k.is_finite() || k < 1.0 || k > max * (1.0 + ADMISSIBLE_SLACK) {
        return Err(CurvError::KOutOfRange { k, max: len });
    }
    Ok(k.min(max))
}

/// `λ_1 + … + λ_⌊k⌋ + (k − ⌊k⌋) λ_{⌊k⌋+1}` for `1 ≤ k ≤ N`.
pub fn k_sum(lambda: &Spectrum, k: f64) -> Result<f64> {
    let k = check_k(lambda.len(), k)?;
    let vals = lambda.values();
    let m = k.floor() as usize;
    let frac = k - m as f64;
    let mut acc: f64 = vals[..m].iter().sum();
    if frac > 0.0 {
        acc += frac * vals[m];
    }
    Ok(acc)
}

/// Outcome of a k-positivity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KVerdict {
    pub k: f64,
    pub k_sum: f64,
    pub nonnegative: bool,
    pub positive: bool,
    /// The k-sum lies within the boundary tolerance of zero; the sign verdicts
    /// are then decided by exact comparison of the computed value.
    pub boundary: bool,
}

pub fn k_verdict(lambda: &Spectrum, k: f64) -> Result<KVerdict> {
    let value = k_sum(lambda, k)?;
    Ok(KVerdict {
        k,
        k_sum: value,
        nonnegative: value >= 0.0,
        positive: value > 0.0,
        boundary: value.abs() <= BOUNDARY_TOL * spectrum_scale(lambda),
    })
}

pub fn is_k_nonnegative(lambda: &Spectrum, k: f64) -> Result<bool> {
    Ok(k_verdict(lambda, k)?.nonnegative)
}

pub fn is_k_positive(lambda: &Spectrum, k: f64) -> Result<bool> {
    Ok(k_verdict(lambda, k)?.positive)
}

/// Sharp lower bound of the class over the spectrum: `Ω Σ_{i≤m} λ_i + (S − mΩ) λ_{m+1}`, `m = ⌊S/Ω⌋`.
pub fn greedy_min(lambda: &Spectrum, class: &WeightClass) -> Result<f64> {
    class.check_admissible(lambda.len())?;
    let vals = lambda.values();
    let m = class.saturated(vals.len());
    let head: f64 = vals[..m].iter().sum();
    if m == vals.len() {
        return Ok(class.highest * head);
    }
    Ok(class.highest * head + (class.total - m as f64 * class.highest) * vals[m])
}

/// Weight vector attaining [`greedy_min`] (aligned with the ascending spectrum).
pub fn greedy_weights(len: usize, class: &WeightClass) -> Result<Vec<f64>> {
    class.check_admissible(len)?;
    let m = class.saturated(len);
    let mut w = vec![0.0; len];
    for x in w.iter_mut().take(m) {
        *x = class.highest;
    }
    if m < len {
        w[m] = class.total - m as f64 * class.highest;
    }
    Ok(w)
}

/// `(S − mΩ) λ_{m+1} + Ω Σ_{i≤m} λ_i` for a chosen `1 ≤ m ≤ N`.
///
/// `m = N` is only defined when `S = NΩ` (the `λ_{N+1}` coefficient vanishes).
pub fn bound_for_m(lambda: &Spectrum, class: &WeightClass, m: usize) -> Result<f64> {
    class.check_admissible(lambda.len())?;
    let vals = lambda.values();
    let len = vals.len();
    if m == 0 || m > len {
        return Err(CurvError::MOutOfRange { m, max: len });
    }
    let head: f64 = vals[..m].iter().sum();
    if m == len {
        let full = len as f64 * class.highest;
        if (class.total - full).abs() > ADMISSIBLE_SLACK * full {
            return Err(CurvError::MOutOfRange { m, max: len - 1 });
        }
        return Ok(class.highest * head);
    }
    Ok((class.total - m as f64 * class.highest) * vals[m] + class.highest * head)
}

/// Check of "S/Ω-nonnegative spectrum ⇒ class minimum is nonnegative".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub k: f64,
    pub k_sum: f64,
    pub k_nonnegative: bool,
    pub greedy_min: f64,
    pub tolerance: f64,
    /// False only if the premise holds and the bound is negative beyond tolerance.
    pub holds: bool,
}

pub fn nonneg_implies_bound(lambda: &Spectrum, class: &WeightClass) -> Result<ImplicationReport> {
    let k = class.ratio();
    let verdict = k_verdict(lambda, k)?;
    let bound = greedy_min(lambda, class)?;
    let tolerance = BOUNDARY_TOL * spectrum_scale(lambda) * class.total.max(1.0);
    Ok(ImplicationReport {
        k,
        k_sum: verdict.k_sum,
        k_nonnegative: verdict.nonnegative,
        greedy_min: bound,
        tolerance,
        holds: !verdict.nonnegative || bound >= -tolerance,
    })
}
