//! `curvop` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical verdict is
//! negative or a bound is violated, 2 for malformed input or arguments.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::fuzz::{run_campaign, CampaignSummary, FuzzConfig, RegressionCase};
use crate::models::{catalog, CatalogEntry, ModelSpec};
use crate::operators::{first_kind_matrix, second_kind_matrix, spectrum, Domain, SpectrumRecord};
use crate::tensor::{traceless_ricci, CurvatureTensor, TracelessSym2};
use crate::verifier::{
    einstein_certificate, threshold_profile, CurvatureAnalysis, EinsteinCertificate, InequalityReport,
    ThresholdProfile, INEQUALITY_TOL,
};
use crate::weights::{k_verdict, KVerdict};

/// Environment variable overriding where fuzz violators are written.
pub const REGRESSION_DIR_ENV: &str = "CURVOP_REGRESSION_DIR";
const DEFAULT_REGRESSION_DIR: &str = "regressions";

#[derive(Debug, Parser)]
#[command(name = "curvop", version, about = "Curvature operator spectra, k-nonnegativity and eigenvalue bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectra of the first- and second-kind curvature operators.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// k-sum of the second-kind spectrum and k-positivity verdicts.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// All five eigenvalue inequalities for one tensor.
    Bounds {
        #[command(flatten)]
        input: InputArgs,
        /// Base margin tolerance, scaled by the tensor size [default: 1e-9].
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Einstein and constant-curvature hypothesis certificate.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded fuzz campaign over random curvature tensors.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Random trace-free samples per tensor.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Base margin tolerance, scaled by the tensor size [default: 1e-9].
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Einstein and constant-curvature k thresholds for dimension n.
    Threshold {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Built-in model geometries.
    Models {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Tensor JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Model spec as inline JSON, e.g. '{"model":"constant","n":3,"kappa":1.0}'.
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output directory (report copy; fuzz violators).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the generation timestamp.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// A rendered report and the exit code it implies.
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<u64>,
    #[serde(flatten)]
    report: &'a T,
}

struct Loaded {
    tensor: CurvatureTensor,
    e: Option<TracelessSym2>,
}

fn load(input: &InputArgs) -> Result<Loaded> {
    match (&input.input, &input.model) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CurvError::InvalidParameter(format!("{}: {e}", path.display())))?;
            let case: RegressionCase = serde_json::from_str(&text)
                .map_err(|e| CurvError::InvalidParameter(format!("{}: {e}", path.display())))?;
            let tensor = CurvatureTensor::from_file(&case.tensor)?;
            let e = case.e_tensor()?;
            if let Some(e) = &e {
                if e.n() != tensor.n() {
                    return Err(CurvError::DimensionMismatch { expected: tensor.n(), found: e.n() });
                }
            }
            Ok(Loaded { tensor, e })
        }
        (None, Some(json)) => {
            let spec =
                ModelSpec::from_json_str(json).map_err(|e| CurvError::InvalidParameter(format!("--model: {e}")))?;
            Ok(Loaded { tensor: spec.build()?, e: None })
        }
        _ => Err(CurvError::InvalidParameter("exactly one of --input or --model is required".into())),
    }
}

fn timestamp(output: &OutputArgs) -> Option<u64> {
    if output.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    }
}

fn render<T: Serialize>(
    command: &str,
    report: &T,
    output: &OutputArgs,
    csv: impl FnOnce() -> String,
    text: impl FnOnce() -> String,
) -> Result<String> {
    let stamp = timestamp(output);
    let body = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope { command, generated_at: stamp, report })?;
            s.push('\n');
            s
        }
        Format::Csv => csv(),
        Format::Text => {
            let mut s = String::new();
            if let Some(t) = stamp {
                let _ = writeln!(s, "generated at {t} (unix seconds)");
            }
            s.push_str(&text());
            s
        }
    };
    if let Some(dir) = &output.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{command}.{}", output.format.extension())), &body)?;
    }
    Ok(body)
}

#[derive(Serialize)]
struct SpectrumReport {
    n: usize,
    fingerprint: String,
    first_kind: SpectrumRecord,
    second_kind: SpectrumRecord,
}

fn fmt_values(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_spectrum(input: &InputArgs, output: &OutputArgs) -> Result<Outcome> {
    let t = load(input)?.tensor;
    let report = SpectrumReport {
        n: t.n(),
        fingerprint: t.fingerprint(),
        first_kind: SpectrumRecord::new(t.n(), Domain::Lambda2, &spectrum(&first_kind_matrix(&t))?),
        second_kind: SpectrumRecord::new(t.n(), Domain::Sym2Traceless, &spectrum(&second_kind_matrix(&t))?),
    };
    let body = render(
        "spectrum",
        &report,
        output,
        || format!("{}\n{}\n", report.first_kind.csv_row(), report.second_kind.csv_row()),
        || {
            format!(
                "n = {}  fingerprint {}\nfirst kind  (lambda2, dim {}): {}\nsecond kind (s2_0, dim {}): {}\n",
                report.n,
                report.fingerprint,
                report.first_kind.dim,
                fmt_values(&report.first_kind.eigenvalues),
                report.second_kind.dim,
                fmt_values(&report.second_kind.eigenvalues)
            )
        },
    )?;
    Ok(Outcome { body, code: 0 })
}

#[derive(Serialize)]
struct CheckReport {
    n: usize,
    fingerprint: String,
    dim: usize,
    #[serde(flatten)]
    verdict: KVerdict,
}

fn cmd_check(input: &InputArgs, k: f64, output: &OutputArgs) -> Result<Outcome> {
    let t = load(input)?.tensor;
    let s = spectrum(&second_kind_matrix(&t))?;
    let verdict = k_verdict(&s, k)?;
    let report = CheckReport { n: t.n(), fingerprint: t.fingerprint(), dim: s.len(), verdict };
    let body = render(
        "check",
        &report,
        output,
        || {
            format!(
                "n,dim,k,k_sum,nonnegative,positive,boundary\n{},{},{},{},{},{},{}\n",
                report.n, report.dim, k, verdict.k_sum, verdict.nonnegative, verdict.positive, verdict.boundary
            )
        },
        || {
            format!(
                "n = {}  dim {}  k = {}\nk-sum {}\nnonnegative {}  positive {}{}\n",
                report.n,
                report.dim,
                k,
                verdict.k_sum,
                verdict.nonnegative,
                verdict.positive,
                if verdict.boundary { "  (boundary)" } else { "" }
            )
        },
    )?;
    Ok(Outcome { body, code: if verdict.nonnegative { 0 } else { 1 } })
}

#[derive(Serialize)]
struct BoundsReport {
    n: usize,
    fingerprint: String,
    e_source: &'static str,
    all_hold: bool,
    reports: Vec<InequalityReport>,
}

fn reports_csv(reports: &[InequalityReport]) -> String {
    let mut s = String::from("name,n,lhs,rhs,margin,verdict,tolerance,fingerprint\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.name, r.n, r.lhs, r.rhs, r.margin, r.verdict, r.tolerance, r.fingerprint
        );
    }
    s
}

fn cmd_bounds(input: &InputArgs, tol: Option<f64>, output: &OutputArgs) -> Result<Outcome> {
    let loaded = load(input)?;
    let tol = tolerance(tol)?;
    let (e, e_source) = match loaded.e {
        Some(e) => (e, "input"),
        None => (traceless_ricci(&loaded.tensor), "traceless_ricci"),
    };
    let analysis = CurvatureAnalysis::with_tolerance(loaded.tensor, tol)?;
    let reports = analysis.all_bounds(&e)?;
    let all_hold = reports.iter().all(|r| r.verdict.is_satisfied());
    let report =
        BoundsReport { n: analysis.n(), fingerprint: analysis.fingerprint().to_string(), e_source, all_hold, reports };
    let body = render(
        "bounds",
        &report,
        output,
        || reports_csv(&report.reports),
        || {
            let mut s = format!("n = {}  fingerprint {}  E = {}\n", report.n, report.fingerprint, e_source);
            for r in &report.reports {
                let _ = writeln!(
                    s,
                    "{:<22} lhs {:>24} rhs {:>24} margin {:>12e}  {}",
                    r.name, r.lhs, r.rhs, r.margin, r.verdict
                );
            }
            s
        },
    )?;
    Ok(Outcome { body, code: if all_hold { 0 } else { 1 } })
}

fn cmd_certify(input: &InputArgs, output: &OutputArgs) -> Result<Outcome> {
    let t = load(input)?.tensor;
    let cert: EinsteinCertificate = einstein_certificate(&t)?;
    let body = render(
        "certify",
        &cert,
        output,
        || {
            format!(
                "n,einstein_k,einstein_k_sum,einstein_nonnegative,constant_curvature_k,constant_curvature_k_sum,\
                 constant_curvature_nonnegative,tensor_is_einstein,inconsistent\n{},{},{},{},{},{},{},{},{}\n",
                cert.n,
                cert.thresholds.einstein_k,
                cert.einstein_hypothesis.k_sum,
                cert.einstein_hypothesis.nonnegative,
                cert.thresholds.constant_curvature_k,
                cert.constant_curvature_hypothesis.k_sum,
                cert.constant_curvature_hypothesis.nonnegative,
                cert.tensor_is_einstein,
                cert.inconsistent
            )
        },
        || {
            let mut s = format!(
                "n = {}  fingerprint {}\nEinstein threshold k = {}: k-sum {}\nconstant-curvature threshold k = {}: k-sum {}\n|E| = {}\n",
                cert.n,
                cert.fingerprint,
                cert.thresholds.einstein_k,
                cert.einstein_hypothesis.k_sum,
                cert.thresholds.constant_curvature_k,
                cert.constant_curvature_hypothesis.k_sum,
                cert.traceless_ricci_norm
            );
            for line in &cert.statements {
                let _ = writeln!(s, "- {line}");
            }
            s
        },
    )?;
    Ok(Outcome { body, code: if cert.issued() { 0 } else { 1 } })
}

fn tolerance(tol: Option<f64>) -> Result<f64> {
    match tol {
        Some(t) if !t.is_finite() => Err(CurvError::InvalidParameter(format!("tolerance must be finite, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(INEQUALITY_TOL),
    }
}

fn regression_dir(output: &OutputArgs) -> PathBuf {
    if let Some(dir) = std::env::var_os(REGRESSION_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    output.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_REGRESSION_DIR))
}

fn cmd_fuzz(cfg: FuzzConfig, output: &OutputArgs) -> Result<Outcome> {
    let dir = regression_dir(output);
    let summary: CampaignSummary = run_campaign(&cfg, Some(Path::new(&dir)))?;
    let body = render(
        "fuzz",
        &summary,
        output,
        || {
            let mut s = String::from("check,evaluations,min_margin,min_scaled_margin,violations\n");
            for c in &summary.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.name, c.evaluations, c.min_margin, c.min_scaled_margin, c.violations
                );
            }
            s
        },
        || {
            let mut s = format!(
                "seed {}  trials {}  n {}..={}  samples {}\n",
                cfg.seed, cfg.trials, cfg.n_min, cfg.n_max, cfg.samples
            );
            for c in &summary.checks {
                let _ = writeln!(
                    s,
                    "{:<22} {:>9} evaluations  min margin {:>12e}  violations {}",
                    c.name, c.evaluations, c.min_margin, c.violations
                );
            }
            let _ = writeln!(s, "max dual-path gap {:e}", summary.max_dual_path_gap);
            for p in &summary.persisted {
                let _ = writeln!(s, "violator written to {p}");
            }
            s
        },
    )?;
    Ok(Outcome { body, code: if summary.passed() { 0 } else { 1 } })
}

#[derive(Serialize)]
struct ThresholdReport {
    #[serde(flatten)]
    profile: ThresholdProfile,
    branch_label: &'static str,
}

fn cmd_threshold(n: usize, output: &OutputArgs) -> Result<Outcome> {
    let profile = threshold_profile(n)?;
    let report = ThresholdReport { profile, branch_label: profile.branch.label() };
    let body = render(
        "threshold",
        &report,
        output,
        || {
            format!(
                "n,einstein_k,constant_curvature_k,branch\n{},{},{},{}\n",
                n, profile.einstein_k, profile.constant_curvature_k, report.branch_label
            )
        },
        || {
            format!(
                "n = {n}\nEinstein threshold k = {}\nconstant-curvature threshold k = {} ({})\n",
                profile.einstein_k, profile.constant_curvature_k, report.branch_label
            )
        },
    )?;
    Ok(Outcome { body, code: 0 })
}

#[derive(Serialize)]
struct ModelsReport {
    models: Vec<CatalogEntry>,
}

fn cmd_models(output: &OutputArgs) -> Result<Outcome> {
    let report = ModelsReport { models: catalog() };
    let body = render(
        "models",
        &report,
        output,
        || {
            let mut s = String::from("name,parameters,example\n");
            for m in &report.models {
                let example = serde_json::to_string(&m.example).unwrap_or_default().replace('"', "\"\"");
                let _ = writeln!(s, "{},\"{}\",\"{}\"", m.name, m.parameters, example);
            }
            s
        },
        || {
            let mut s = String::new();
            for m in &report.models {
                let example = serde_json::to_string(&m.example).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{}\n  parameters: {}\n  {}\n  example: {}",
                    m.name, m.parameters, m.description, example
                );
            }
            s
        },
    )?;
    Ok(Outcome { body, code: 0 })
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Spectrum { input, output } => cmd_spectrum(&input, &output),
        Command::Check { input, k, output } => cmd_check(&input, k, &output),
        Command::Bounds { input, tol, output } => cmd_bounds(&input, tol, &output),
        Command::Certify { input, output } => cmd_certify(&input, &output),
        Command::Fuzz { seed, trials, n_min, n_max, samples, tol, output } => {
            let cfg =
                FuzzConfig { seed, trials, n_min, n_max, samples, tolerance: tolerance(tol)?, ..FuzzConfig::default() };
            cmd_fuzz(cfg, &output)
        }
        Command::Threshold { n, output } => cmd_threshold(n, &output),
        Command::Models { output } => cmd_models(&output),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.body);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
