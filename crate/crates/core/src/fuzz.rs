//! Seeded fuzz campaigns over random algebraic curvature tensors.
//!
//! Trial `i` of a campaign with seed `s` uses the stream seed `s ^ i` for its
//! tensor (stream 0) and its trace-free samples (stream 1), so any trial can be
//! replayed on its own. Trials run on the rayon pool; outcomes are collected
//! in trial order, so summaries do not depend on scheduling.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::random::{random_curvature, random_traceless};
use crate::tensor::{traceless_ricci, CurvatureTensor, Sym2Tensor, TensorFile, TracelessSym2};
use crate::verifier::{CurvatureAnalysis, InequalityReport, CHECK_NAMES, INEQUALITY_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Random trace-free samples per tensor, in addition to its traceless Ricci tensor.
    pub samples: usize,
    /// Kulkarni–Nomizu squares per tensor cycle through `1..=max_terms`.
    pub max_terms: usize,
    pub tolerance: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self { seed: 0, trials: 1000, n_min: 3, n_max: 6, samples: 200, max_terms: 4, tolerance: INEQUALITY_TOL }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CurvError::InvalidParameter("trials must be >= 1".into()));
        }
        if self.n_min < 3 || self.n_max < self.n_min {
            return Err(CurvError::InvalidParameter(format!(
                "dimension range {}..={} must satisfy 3 <= n_min <= n_max",
                self.n_min, self.n_max
            )));
        }
        if self.n_max > 32 {
            return Err(CurvError::InvalidParameter("dimensions above 32 are not supported".into()));
        }
        if self.max_terms == 0 {
            return Err(CurvError::InvalidParameter("max_terms must be >= 1".into()));
        }
        if !self.tolerance.is_finite() {
            return Err(CurvError::InvalidParameter("tolerance must be finite".into()));
        }
        Ok(())
    }

    pub fn plan(&self, index: usize) -> TrialPlan {
        let span = self.n_max - self.n_min + 1;
        TrialPlan {
            index,
            seed: self.seed ^ index as u64,
            n: self.n_min + index % span,
            terms: 1 + (index / span) % self.max_terms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub terms: usize,
}

impl TrialPlan {
    pub fn tensor(&self) -> Result<CurvatureTensor> {
        random_curvature(self.seed, self.n, self.terms)
    }

    /// Traceless Ricci of the tensor first, then `count` random trace-free tensors.
    pub fn samples(&self, tensor: &CurvatureTensor, count: usize) -> Vec<TracelessSym2> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(1);
        let mut out = Vec::with_capacity(count + 1);
        out.push(traceless_ricci(tensor));
        out.extend((0..count).map(|_| random_traceless(&mut rng, self.n)));
        out
    }
}

/// A failed check, with enough context to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub terms: usize,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub fingerprint: String,
    /// Index of the trace-free sample (0 is the traceless Ricci tensor).
    pub sample: Option<usize>,
    pub e: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluations: usize,
    pub min_margin: f64,
    /// Smallest `margin / tolerance`; below −1 means violated.
    pub min_scaled_margin: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub config: FuzzConfig,
    pub checks: Vec<CheckSummary>,
    /// Largest relative gap between the index and eigenbasis evaluations of `⟨R̊E, E⟩`.
    pub max_dual_path_gap: f64,
    pub violations: Vec<Violation>,
    pub persisted: Vec<String>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct TrialOutcome {
    reports: Vec<InequalityReport>,
    dual_path_gap: f64,
    violations: Vec<Violation>,
    tensor: CurvatureTensor,
}

fn matrix_rows(e: &TracelessSym2) -> Vec<Vec<f64>> {
    e.matrix().row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn run_trial(cfg: &FuzzConfig, plan: TrialPlan) -> Result<TrialOutcome> {
    let tensor = plan.tensor()?;
    let analysis = CurvatureAnalysis::with_tolerance(tensor.clone(), cfg.tolerance)?.with_seed(plan.seed);
    let mut reports = vec![analysis.scalar_bound()?, analysis.ricci_bound()?, analysis.ricci_combined_bound()?];
    let mut violations = Vec::new();
    let mut dual_path_gap = 0.0_f64;
    let violation = |r: &InequalityReport, e: Option<(usize, &TracelessSym2)>| Violation {
        trial: plan.index,
        seed: plan.seed,
        n: plan.n,
        terms: plan.terms,
        check: r.name.clone(),
        lhs: r.lhs,
        rhs: r.rhs,
        margin: r.margin,
        tolerance: r.tolerance,
        fingerprint: r.fingerprint.clone(),
        sample: e.map(|(i, _)| i),
        e: e.map(|(_, e)| matrix_rows(e)),
    };
    for r in &reports {
        if !r.verdict.is_satisfied() {
            violations.push(violation(r, None));
        }
    }
    for (i, e) in plan.samples(&tensor, cfg.samples).iter().enumerate() {
        for r in [analysis.quadform_bound(e)?, analysis.bochner_bound(e)?] {
            if !r.verdict.is_satisfied() {
                violations.push(violation(&r, Some((i, e))));
            }
            reports.push(r);
        }
        let terms = analysis.bochner_terms(e)?;
        let scale = tensor.sup_norm().max(1.0) * e.norm_squared().max(1.0);
        dual_path_gap = dual_path_gap.max((terms.quadratic_form - terms.eigen_sum).abs() / scale);
    }
    Ok(TrialOutcome { reports, dual_path_gap, violations, tensor })
}

/// Stored form of a failing case: a tensor file plus replay metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionCase {
    #[serde(flatten)]
    pub tensor: TensorFile,
    #[serde(default)]
    pub violation: Option<Violation>,
    /// Trace-free tensor used by the failing check, row-major.
    #[serde(default)]
    pub e: Option<Vec<Vec<f64>>>,
}

impl RegressionCase {
    pub fn e_tensor(&self) -> Result<Option<TracelessSym2>> {
        let Some(rows) = &self.e else { return Ok(None) };
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CurvError::InvalidParameter("e must be a square matrix".into()));
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(Some(TracelessSym2::new(Sym2Tensor::from_matrix(m)?)?))
    }
}

pub fn persist_violation(dir: &Path, tensor: &CurvatureTensor, v: &Violation) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let case = RegressionCase { tensor: tensor.to_file_dense(), violation: Some(v.clone()), e: v.e.clone() };
    let sample = v.sample.map(|s| format!("-e{s}")).unwrap_or_default();
    let path = dir.join(format!("violation-{}-{}-t{}{sample}.json", v.fingerprint, v.check, v.trial));
    fs::write(&path, serde_json::to_string_pretty(&case)?)?;
    Ok(path)
}

/// Runs the campaign; violators are written to `persist_dir` when given.
pub fn run_campaign(cfg: &FuzzConfig, persist_dir: Option<&Path>) -> Result<CampaignSummary> {
    cfg.validate()?;
    let outcomes: Vec<Result<TrialOutcome>> =
        (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, cfg.plan(i))).collect();

    let mut checks: Vec<CheckSummary> = CHECK_NAMES
        .iter()
        .map(|name| CheckSummary {
            name: name.to_string(),
            evaluations: 0,
            min_margin: f64::INFINITY,
            min_scaled_margin: f64::INFINITY,
            violations: 0,
        })
        .collect();
    let mut max_dual_path_gap = 0.0_f64;
    let mut violations = Vec::new();
    let mut persisted = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        max_dual_path_gap = max_dual_path_gap.max(outcome.dual_path_gap);
        for r in &outcome.reports {
            let c = checks.iter_mut().find(|c| c.name == r.name).expect("known check name");
            c.evaluations += 1;
            c.min_margin = c.min_margin.min(r.margin);
            let scaled = if r.tolerance > 0.0 { r.margin / r.tolerance } else { r.margin };
            c.min_scaled_margin = c.min_scaled_margin.min(scaled);
            if !r.verdict.is_satisfied() {
                c.violations += 1;
            }
        }
        for v in outcome.violations {
            if let Some(dir) = persist_dir {
                persisted.push(persist_violation(dir, &outcome.tensor, &v)?.display().to_string());
            }
            violations.push(v);
        }
    }
    Ok(CampaignSummary { config: cfg.clone(), checks, max_dual_path_gap, violations, persisted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FuzzConfig {
        FuzzConfig { trials: 12, samples: 5, ..FuzzConfig::default() }
    }

    #[test]
    fn plan_cycles_dimensions_and_terms() {
        let cfg = small();
        let plans: Vec<_> = (0..8).map(|i| cfg.plan(i)).collect();
        assert_eq!(plans.iter().map(|p| p.n).collect::<Vec<_>>(), [3, 4, 5, 6, 3, 4, 5, 6]);
        assert_eq!(plans.iter().map(|p| p.terms).collect::<Vec<_>>(), [1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(plans[5].seed, 5);
    }

    #[test]
    fn small_campaign_has_no_violations() {
        let s = run_campaign(&small(), None).unwrap();
        assert!(s.passed());
        let per_tensor = 12;
        assert_eq!(s.checks[0].evaluations, per_tensor);
        assert_eq!(s.checks[3].evaluations, per_tensor * 6);
        assert!(s.max_dual_path_gap < 1e-12);
    }

    #[test]
    fn campaign_is_deterministic() {
        let a = run_campaign(&small(), None).unwrap();
        let b = run_campaign(&small(), None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(run_campaign(&FuzzConfig { trials: 0, ..small() }, None).is_err());
        assert!(run_campaign(&FuzzConfig { n_min: 2, ..small() }, None).is_err());
        assert!(run_campaign(&FuzzConfig { n_min: 5, n_max: 4, ..small() }, None).is_err());
    }

    #[test]
    fn forced_violations_persist_and_replay() {
        let dir = tempfile::tempdir().unwrap();
        // A negative tolerance demands a strictly positive margin, which the
        // saturated scalar bound can never give.
        let cfg = FuzzConfig { trials: 2, samples: 1, tolerance: -1e3, ..FuzzConfig::default() };
        let s = run_campaign(&cfg, Some(dir.path())).unwrap();
        assert!(!s.passed());
        assert_eq!(s.persisted.len(), s.violations.len());
        let v = s.violations.iter().find(|v| v.e.is_some()).unwrap();
        let path = s.persisted[s.violations.iter().position(|x| x == v).unwrap()].clone();
        let case: RegressionCase = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
        let t = CurvatureTensor::from_file(&case.tensor).unwrap();
        assert_eq!(t.fingerprint(), v.fingerprint);
        let e = case.e_tensor().unwrap().unwrap();
        let a = CurvatureAnalysis::with_tolerance(t, cfg.tolerance).unwrap();
        let replay = match v.check.as_str() {
            "quadratic_form_bound" => a.quadform_bound(&e).unwrap(),
            _ => a.bochner_bound(&e).unwrap(),
        };
        assert_eq!(replay.margin, v.margin);
    }
}
