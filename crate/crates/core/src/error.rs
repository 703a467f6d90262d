use thiserror::Error;

use crate::tensor::SymmetryReport;

pub type Result<T> = std::result::Result<T, CurvError>;

#[derive(Debug, Error)]
pub enum CurvError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension n = {n} not supported (requires n >= {min})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("tensor violates curvature symmetries: {0}")]
    InvalidSymmetry(SymmetryReport),

    #[error("tensor is not trace-free: |trace| = {trace:e} exceeds {tol:e}")]
    NotTraceFree { trace: f64, tol: f64 },

    #[error("matrix is not symmetric: max asymmetry {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },

    #[error("k = {k} outside the admissible range [1, {max}]")]
    KOutOfRange { k: f64, max: usize },

    #[error("m = {m} outside the admissible range [1, {max}]")]
    MOutOfRange { m: usize, max: usize },

    #[error("inadmissible weight class: total {total} exceeds {len} x highest weight {highest}")]
    InadmissibleClass { highest: f64, total: f64, len: usize },

    #[error("dual-path mismatch in {what}: {first} vs {second}")]
    DualPathMismatch { what: &'static str, first: f64, second: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index ({i}, {j}, {k}, {l}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, l: usize, n: usize },

    #[error("conflicting entry at ({i}, {j}, {k}, {l}): implied {existing}, given {given}")]
    ConflictingEntry { i: usize, j: usize, k: usize, l: usize, existing: f64, given: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
