//! Pointwise checks of the eigenvalue inequalities behind the Einstein
//! rigidity theorem for harmonic curvature, plus thresholds and certificates.
//!
//! With `λ` the ascending spectrum of `R̊`, `N = (n−1)(n+2)/2`, and
//! `G(Ω, S)` the greedy minimum of the weight class `(Ω, S)`:
//!
//! | check                  | inequality                                                   |
//! |------------------------|--------------------------------------------------------------|
//! | `scalar_bound`         | `s ≥ 2n/(n+2) · G(1, N)`                                     |
//! | `ricci_bound`          | `min Ric ≥ (n−1)/(n+1) · G(1, n) + s/(n(n+1))`              |
//! | `ricci_combined_bound` | `min Ric ≥ G(n/(n+2), n−1)`                                  |
//! | `quadratic_form_bound` | `⟨R̊E, E⟩ ≥ λ_1 |E|²`                                         |
//! | `bochner_bound`        | `⟨R̊E, E⟩ + Ric_ij E_it E_jt ≥ G(2(n+1)/(n+2), n) · |E|²`     |
//!
//! All five are theorems for every algebraic curvature tensor and every
//! trace-free `E`; a violation indicates an assembly or convention bug.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::operators::{
    coordinates, eigen_decomposition, quad_form, second_kind_matrix, Basis, EigenDecomposition, Spectrum,
};
use crate::tensor::{ricci, traceless_ricci, CurvatureTensor, Sym2Tensor, TracelessSym2};
use crate::weights::{greedy_min, k_verdict, KVerdict, WeightClass};

/// Base inequality tolerance for unit-scale tensors; scaled by `max(1, ‖R‖_∞)`
/// and, for checks involving `E`, by `max(1, |E|²)`.
pub const INEQUALITY_TOL: f64 = 1e-9;

/// Relative agreement required between the two evaluations of `⟨R̊E, E⟩`.
pub const DUAL_PATH_TOL: f64 = 1e-9;

pub const SCALAR_BOUND: &str = "scalar_bound";
pub const RICCI_BOUND: &str = "ricci_bound";
pub const RICCI_COMBINED_BOUND: &str = "ricci_combined_bound";
pub const QUADRATIC_FORM_BOUND: &str = "quadratic_form_bound";
pub const BOCHNER_BOUND: &str = "bochner_bound";

pub const CHECK_NAMES: [&str; 5] =
    [SCALAR_BOUND, RICCI_BOUND, RICCI_COMBINED_BOUND, QUADRATIC_FORM_BOUND, BOCHNER_BOUND];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Boundary,
    Violated,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin < -tol || margin.is_nan() {
            Verdict::Violated
        } else if margin <= tol {
            Verdict::Boundary
        } else {
            Verdict::Holds
        }
    }

    /// Holds or boundary.
    pub fn is_satisfied(self) -> bool {
        self != Verdict::Violated
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Boundary => "boundary",
            Verdict::Violated => "violated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub n: usize,
    pub fingerprint: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
}

/// Everything the checks need about one tensor, computed once.
#[derive(Debug, Clone)]
pub struct CurvatureAnalysis {
    tensor: CurvatureTensor,
    ricci: Sym2Tensor,
    ricci_min: f64,
    scalar: f64,
    basis: Basis,
    eigen: EigenDecomposition,
    fingerprint: String,
    base_tol: f64,
    seed: Option<u64>,
}

fn require_theorem_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(CurvError::DimensionTooSmall { n, min: 3 });
    }
    Ok(())
}

impl CurvatureAnalysis {
    pub fn new(tensor: CurvatureTensor) -> Result<Self> {
        Self::with_tolerance(tensor, INEQUALITY_TOL)
    }

    pub fn with_tolerance(tensor: CurvatureTensor, base_tol: f64) -> Result<Self> {
        let n = tensor.n();
        require_theorem_dimension(n)?;
        let ric = ricci(&tensor);
        let ricci_min = ric.min_eigenvalue();
        let scalar = ric.trace();
        let basis = crate::operators::basis_s2_traceless(n)?;
        let eigen = eigen_decomposition(&second_kind_matrix(&tensor))?;
        let fingerprint = tensor.fingerprint();
        Ok(Self { tensor, ricci: ric, ricci_min, scalar, basis, eigen, fingerprint, base_tol, seed: None })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn tensor(&self) -> &CurvatureTensor {
        &self.tensor
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.eigen.spectrum
    }

    pub fn ricci(&self) -> &Sym2Tensor {
        &self.ricci
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Tolerance for checks not involving `E`.
    pub fn tolerance(&self) -> f64 {
        self.base_tol * self.tensor.sup_norm().max(1.0)
    }

    fn tolerance_with(&self, e: &TracelessSym2) -> f64 {
        self.tolerance() * e.norm_squared().max(1.0)
    }

    fn greedy(&self, highest: f64, total: f64) -> Result<f64> {
        greedy_min(self.spectrum(), &WeightClass::new(highest, total)?)
    }

    fn report(&self, name: &str, lhs: f64, rhs: f64, tol: f64) -> InequalityReport {
        let margin = lhs - rhs;
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            verdict: Verdict::from_margin(margin, tol),
            n: self.n(),
            fingerprint: self.fingerprint.clone(),
            seed: self.seed,
            tolerance: tol,
        }
    }

    fn check_e(&self, e: &TracelessSym2) -> Result<()> {
        if e.n() != self.n() {
            return Err(CurvError::DimensionMismatch { expected: self.n(), found: e.n() });
        }
        Ok(())
    }

    /// `s ≥ 2n/(n+2) · G(1, N)`.
    pub fn scalar_bound(&self) -> Result<InequalityReport> {
        let n = self.n() as f64;
        let big_n = self.spectrum().len() as f64;
        let rhs = 2.0 * n / (n + 2.0) * self.greedy(1.0, big_n)?;
        Ok(self.report(SCALAR_BOUND, self.scalar, rhs, self.tolerance()))
    }

    /// `min Ric ≥ (n−1)/(n+1) · G(1, n) + s/(n(n+1))`.
    pub fn ricci_bound(&self) -> Result<InequalityReport> {
        let n = self.n() as f64;
        let rhs = (n - 1.0) / (n + 1.0) * self.greedy(1.0, n)? + self.scalar / (n * (n + 1.0));
        Ok(self.report(RICCI_BOUND, self.ricci_min, rhs, self.tolerance()))
    }

    /// `min Ric ≥ G(n/(n+2), n−1)`.
    pub fn ricci_combined_bound(&self) -> Result<InequalityReport> {
        let n = self.n() as f64;
        let rhs = self.greedy(n / (n + 2.0), n - 1.0)?;
        Ok(self.report(RICCI_COMBINED_BOUND, self.ricci_min, rhs, self.tolerance()))
    }

    /// `⟨R̊E, E⟩ ≥ λ_1 |E|²`.
    pub fn quadform_bound(&self, e: &TracelessSym2) -> Result<InequalityReport> {
        self.check_e(e)?;
        let lhs = quad_form(&self.tensor, e)?;
        let rhs = self.greedy(1.0, 1.0)? * e.norm_squared();
        Ok(self.report(QUADRATIC_FORM_BOUND, lhs, rhs, self.tolerance_with(e)))
    }

    /// Both forms of `⟨R̊E, E⟩ + Ric_ij E_it E_jt`; fails if they disagree.
    pub fn bochner_terms(&self, e: &TracelessSym2) -> Result<BochnerTerms> {
        self.check_e(e)?;
        let index_form = quad_form(&self.tensor, e)?;
        let coords = coordinates(e, &self.basis)?;
        let eigen_form: f64 = (0..coords.len())
            .map(|a| {
                let col = self.eigen.vectors.column(a);
                let e_alpha: f64 = col.iter().zip(&coords).map(|(v, c)| v * c).sum();
                self.eigen.spectrum.values()[a] * e_alpha * e_alpha
            })
            .sum();
        let scale = self.tensor.sup_norm().max(1.0) * e.norm_squared().max(1.0);
        if (index_form - eigen_form).abs() > DUAL_PATH_TOL * scale {
            return Err(CurvError::DualPathMismatch { what: "<R̊E,E>", first: index_form, second: eigen_form });
        }
        let em = e.matrix();
        let ricci_term = (em * self.ricci.matrix() * em).trace();
        Ok(BochnerTerms {
            quadratic_form: index_form,
            eigen_sum: eigen_form,
            ricci_term,
            total: index_form + ricci_term,
        })
    }

    /// `⟨R̊E, E⟩ + Ric_ij E_it E_jt ≥ G(2(n+1)/(n+2), n) · |E|²`.
    pub fn bochner_bound(&self, e: &TracelessSym2) -> Result<InequalityReport> {
        let terms = self.bochner_terms(e)?;
        let n = self.n() as f64;
        let rhs = self.greedy(2.0 * (n + 1.0) / (n + 2.0), n)? * e.norm_squared();
        Ok(self.report(BOCHNER_BOUND, terms.total, rhs, self.tolerance_with(e)))
    }

    /// All five checks, in [`CHECK_NAMES`] order.
    pub fn all_bounds(&self, e: &TracelessSym2) -> Result<Vec<InequalityReport>> {
        Ok(vec![
            self.scalar_bound()?,
            self.ricci_bound()?,
            self.ricci_combined_bound()?,
            self.quadform_bound(e)?,
            self.bochner_bound(e)?,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BochnerTerms {
    /// `⟨R̊E, E⟩` by index contraction.
    pub quadratic_form: f64,
    /// `Σ_α λ_α E_α²` in the eigenbasis of `R̊`.
    pub eigen_sum: f64,
    /// `Ric_ij E_it E_jt`.
    pub ricci_term: f64,
    pub total: f64,
}

pub fn scalar_bound_check(t: &CurvatureTensor) -> Result<InequalityReport> {
    CurvatureAnalysis::new(t.clone())?.scalar_bound()
}

pub fn ricci_bound_check(t: &CurvatureTensor) -> Result<InequalityReport> {
    CurvatureAnalysis::new(t.clone())?.ricci_bound()
}

pub fn ricci_combined_check(t: &CurvatureTensor) -> Result<InequalityReport> {
    CurvatureAnalysis::new(t.clone())?.ricci_combined_bound()
}

pub fn quadform_bound_check(t: &CurvatureTensor, e: &TracelessSym2) -> Result<InequalityReport> {
    CurvatureAnalysis::new(t.clone())?.quadform_bound(e)
}

pub fn bochner_rhs(t: &CurvatureTensor, e: &TracelessSym2) -> Result<f64> {
    Ok(CurvatureAnalysis::new(t.clone())?.bochner_terms(e)?.total)
}

pub fn bochner_bound_check(t: &CurvatureTensor, e: &TracelessSym2) -> Result<InequalityReport> {
    CurvatureAnalysis::new(t.clone())?.bochner_bound(e)
}

/// Dimension ranges of the constant-curvature threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdBranch {
    /// `3 ≤ n ≤ 7`: same as the Einstein threshold.
    Low,
    /// `8 ≤ n ≤ 13`: `k = 4`.
    Middle,
    /// `n ≥ 14`: `k = ⌊(n+2)/4⌋`.
    High,
}

impl ThresholdBranch {
    pub fn label(self) -> &'static str {
        match self {
            ThresholdBranch::Low => "3 <= n <= 7",
            ThresholdBranch::Middle => "8 <= n <= 13",
            ThresholdBranch::High => "n >= 14",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdProfile {
    pub n: usize,
    /// `n(n+2)/(2(n+1))`: k-nonnegativity at this k with harmonic curvature forces Einstein.
    pub einstein_k: f64,
    /// k-nonnegativity at this k with harmonic curvature forces constant curvature.
    pub constant_curvature_k: f64,
    pub branch: ThresholdBranch,
}

pub fn threshold_profile(n: usize) -> Result<ThresholdProfile> {
    require_theorem_dimension(n)?;
    let einstein_k = (n * (n + 2)) as f64 / (2 * (n + 1)) as f64;
    let (constant_curvature_k, branch) = match n {
        3..=7 => (einstein_k, ThresholdBranch::Low),
        8..=13 => (4.0, ThresholdBranch::Middle),
        _ => (((n + 2) / 4) as f64, ThresholdBranch::High),
    };
    Ok(ThresholdProfile { n, einstein_k, constant_curvature_k, branch })
}

/// Pointwise verdict on the spectral hypotheses of the rigidity results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EinsteinCertificate {
    pub n: usize,
    pub fingerprint: String,
    pub thresholds: ThresholdProfile,
    pub einstein_hypothesis: KVerdict,
    pub constant_curvature_hypothesis: KVerdict,
    pub traceless_ricci_norm: f64,
    pub tensor_is_einstein: bool,
    pub tensor_is_constant_curvature: bool,
    /// The hypothesis holds but the tensor itself contradicts the conclusion.
    pub inconsistent: bool,
    pub statements: Vec<String>,
}

impl EinsteinCertificate {
    pub fn issued(&self) -> bool {
        self.einstein_hypothesis.nonnegative
    }
}

fn is_constant_curvature(t: &CurvatureTensor, scalar: f64, tol: f64) -> Result<bool> {
    let n = t.n() as f64;
    let model = crate::models::constant_curvature(t.n(), scalar / (n * (n - 1.0)))?;
    let diff = t.components().iter().zip(model.components()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(diff <= tol)
}

pub fn einstein_certificate(t: &CurvatureTensor) -> Result<EinsteinCertificate> {
    let analysis = CurvatureAnalysis::new(t.clone())?;
    let n = t.n();
    let thresholds = threshold_profile(n)?;
    let einstein_hypothesis = k_verdict(analysis.spectrum(), thresholds.einstein_k)?;
    let constant_curvature_hypothesis = k_verdict(analysis.spectrum(), thresholds.constant_curvature_k)?;
    let tol = analysis.tolerance();
    let traceless_ricci_norm = traceless_ricci(t).frobenius_norm();
    let tensor_is_einstein = traceless_ricci_norm <= tol;
    let tensor_is_constant_curvature = is_constant_curvature(t, analysis.scalar(), tol)?;

    let mut statements = Vec::new();
    let mut inconsistent = false;
    if einstein_hypothesis.nonnegative {
        statements.push(format!(
            "R̊ is {}-nonnegative: any compact manifold with harmonic curvature whose curvature \
             tensor equals this one at every point is Einstein.",
            thresholds.einstein_k
        ));
        if !tensor_is_einstein {
            inconsistent = true;
            statements.push(
                "the tensor is not Einstein, so it cannot occur on a compact manifold with harmonic curvature."
                    .to_string(),
            );
        }
    } else {
        statements.push(format!(
            "R̊ is not {}-nonnegative (k-sum {}); the Einstein rigidity hypothesis fails.",
            thresholds.einstein_k, einstein_hypothesis.k_sum
        ));
    }
    if constant_curvature_hypothesis.nonnegative {
        statements.push(format!(
            "R̊ is {}-nonnegative: any compact manifold with harmonic curvature whose curvature \
             tensor equals this one at every point has constant curvature.",
            thresholds.constant_curvature_k
        ));
        if !tensor_is_constant_curvature {
            inconsistent = true;
            statements.push(
                "the tensor does not have constant curvature, so it cannot occur on a compact manifold \
                 with harmonic curvature."
                    .to_string(),
            );
        }
    }
    if einstein_hypothesis.boundary {
        statements.push("the k-sum is within rounding of zero; the verdict is a boundary case.".to_string());
    }
    statements.push(
        "pointwise algebraic check only: harmonic curvature and compactness are assumed, not verified.".to_string(),
    );

    Ok(EinsteinCertificate {
        n,
        fingerprint: analysis.fingerprint().to_string(),
        thresholds,
        einstein_hypothesis,
        constant_curvature_hypothesis,
        traceless_ricci_norm,
        tensor_is_einstein,
        tensor_is_constant_curvature,
        inconsistent,
        statements,
    })
}
