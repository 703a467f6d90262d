//! Algebraic curvature tensors and symmetric 2-tensors.
//!
//! Components are stored densely as `R[i][j][k][l]` in row-major order. The
//! sign convention is fixed so that `R_{ijij}` is the sectional curvature of
//! the plane spanned by `e_i, e_j`:
//!
//! ```text
//! constant curvature κ:  R_{ijkl} = κ (δ_ik δ_jl − δ_il δ_jk)
//! Ricci:                 Ric_{ij} = Σ_k R_{kikj}
//! ```
//!
//! Under this convention the round sphere has positive Ricci curvature and a
//! positive-definite curvature operator of the second kind.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CurvError, Result};

/// Absolute symmetry tolerance for unit-scale tensors. Scaled by `max(1, ‖R‖_∞)`.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Relative trace tolerance for trace-free tensors.
pub const TRACE_TOL: f64 = 1e-12;

/// Maximum absolute violation of each symmetry family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub antisymmetry: f64,
    pub pair_symmetry: f64,
    pub bianchi: f64,
    pub tolerance: f64,
}

impl SymmetryReport {
    pub fn max_violation(&self) -> f64 {
        self.antisymmetry.max(self.pair_symmetry).max(self.bianchi)
    }

    pub fn is_valid(&self) -> bool {
        self.max_violation() <= self.tolerance
    }
}

impl fmt::Display for SymmetryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "antisymmetry {:e}, pair symmetry {:e}, first Bianchi {:e} (tolerance {:e}): {}",
            self.antisymmetry,
            self.pair_symmetry,
            self.bianchi,
            self.tolerance,
            if self.is_valid() { "valid" } else { "invalid" }
        )
    }
}

#[inline]
fn flat(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// Checks antisymmetry, pair symmetry and the first Bianchi identity on a raw
/// `n⁴` component array.
pub fn validate_symmetries(n: usize, data: &[f64]) -> Result<SymmetryReport> {
    let expected = n.pow(4);
    if data.len() != expected {
        return Err(CurvError::DimensionMismatch { expected, found: data.len() });
    }
    let at = |i, j, k, l| data[flat(n, i, j, k, l)];
    let mut antisymmetry = 0.0_f64;
    let mut pair_symmetry = 0.0_f64;
    let mut bianchi = 0.0_f64;
    let mut scale = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let r = at(i, j, k, l);
                    scale = scale.max(r.abs());
                    antisymmetry = antisymmetry.max((r + at(j, i, k, l)).abs()).max((r + at(i, j, l, k)).abs());
                    pair_symmetry = pair_symmetry.max((r - at(k, l, i, j)).abs());
                    bianchi = bianchi.max((r + at(i, k, l, j) + at(i, l, j, k)).abs());
                }
            }
        }
    }
    Ok(SymmetryReport { antisymmetry, pair_symmetry, bianchi, tolerance: SYMMETRY_TOL * scale.max(1.0) })
}

/// An algebraic curvature tensor on `ℝⁿ` with the standard inner product.
///
/// Values of this type always satisfy the curvature symmetries within
/// tolerance; raw arrays are checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    data: Vec<f64>,
}

impl CurvatureTensor {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dimension(n)?;
        let report = validate_symmetries(n, &data)?;
        if !report.is_valid() {
            return Err(CurvError::InvalidSymmetry(report));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, data: vec![0.0; n.pow(4)] })
    }

    /// Builds from a component function that is known to produce a valid tensor.
    pub(crate) fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[flat(self.n, i, j, k, l)]
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    pub fn into_components(self) -> Vec<f64> {
        self.data
    }

    pub fn symmetry_report(&self) -> SymmetryReport {
        validate_symmetries(self.n, &self.data).expect("shape is fixed at construction")
    }

    /// Largest absolute component.
    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(CurvError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, data })
    }

    /// Pulls the tensor back by an orthogonal map:
    /// `R'_{ijkl} = Σ Q_{ia} Q_{jb} Q_{kc} Q_{ld} R_{abcd}`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Result<Self> {
        let n = self.n;
        if q.nrows() != n || q.ncols() != n {
            return Err(CurvError::DimensionMismatch { expected: n, found: q.nrows() });
        }
        // Contract one slot at a time; each pass moves the transformed slot to the back.
        let mut cur = self.data.clone();
        for _ in 0..4 {
            let mut next = vec![0.0; cur.len()];
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for i in 0..n {
                            let mut acc = 0.0;
                            for a in 0..n {
                                acc += q[(i, a)] * cur[flat(n, a, b, c, d)];
                            }
                            next[flat(n, b, c, d, i)] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        CurvatureTensor::new(n, cur)
    }

    /// Short content hash of the components, for regression bookkeeping.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n as u64).to_le_bytes());
        for v in &self.data {
            // -0.0 and 0.0 hash alike
            hasher.update((v + 0.0).to_le_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }

    /// Sparse JSON form listing one representative per symmetry orbit.
    pub fn to_file(&self) -> TensorFile {
        let n = self.n;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    for l in (k + 1)..n {
                        if (i, j) > (k, l) {
                            continue;
                        }
                        let v = self.get(i, j, k, l);
                        if v != 0.0 {
                            entries.push(TensorEntry { i, j, k, l, v });
                        }
                    }
                }
            }
        }
        TensorFile { n, entries }
    }

    /// Every component, so that [`CurvatureTensor::from_file`] reproduces the
    /// tensor bit for bit (orbit partners may differ in the last ulp).
    pub fn to_file_dense(&self) -> TensorFile {
        let n = self.n;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        entries.push(TensorEntry { i, j, k, l, v: self.get(i, j, k, l) });
                    }
                }
            }
        }
        TensorFile { n, entries }
    }

    /// Completes the listed entries by antisymmetry and pair symmetry, then
    /// validates the result (including the first Bianchi identity). Listed
    /// entries keep their exact values; implied ones must agree with them to
    /// within `1e-12` relative.
    pub fn from_file(file: &TensorFile) -> Result<Self> {
        let n = file.n;
        check_dimension(n)?;
        let size = n.pow(4);
        let mut explicit: Vec<Option<f64>> = vec![None; size];
        for e in &file.entries {
            let (i, j, k, l, v) = (e.i, e.j, e.k, e.l, e.v);
            if i >= n || j >= n || k >= n || l >= n {
                return Err(CurvError::IndexOutOfRange { i, j, k, l, n });
            }
            if !v.is_finite() {
                return Err(CurvError::InvalidParameter(format!("non-finite entry at ({i}, {j}, {k}, {l})")));
            }
            let slot = &mut explicit[flat(n, i, j, k, l)];
            if let Some(existing) = *slot {
                if !agrees(existing, v) {
                    return Err(CurvError::ConflictingEntry { i, j, k, l, existing, given: v });
                }
            }
            *slot = Some(v);
        }
        let mut implied: Vec<Option<f64>> = vec![None; size];
        for e in &file.entries {
            let (i, j, k, l, v) = (e.i, e.j, e.k, e.l, e.v);
            let orbit = [
                (i, j, k, l, v),
                (j, i, k, l, -v),
                (i, j, l, k, -v),
                (j, i, l, k, v),
                (k, l, i, j, v),
                (l, k, i, j, -v),
                (k, l, j, i, -v),
                (l, k, j, i, v),
            ];
            for (a, b, c, d, w) in orbit {
                let idx = flat(n, a, b, c, d);
                if let Some(existing) = explicit[idx].or(implied[idx]) {
                    if !agrees(existing, w) {
                        return Err(CurvError::ConflictingEntry { i: a, j: b, k: c, l: d, existing, given: w });
                    }
                }
                if explicit[idx].is_none() && implied[idx].is_none() {
                    implied[idx] = Some(w);
                }
            }
        }
        let data = explicit.into_iter().zip(implied).map(|(x, y)| x.or(y).unwrap_or(0.0)).collect();
        CurvatureTensor::new(n, data)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}

fn agrees(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(CurvError::DimensionTooSmall { n, min: 2 });
    }
    Ok(())
}

/// One `R_{ijkl} = v` entry of the JSON tensor schema (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: f64,
}

/// JSON tensor schema: `{"n": 3, "entries": [{"i":0,"j":1,"k":0,"l":1,"v":1.0}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub n: usize,
    pub entries: Vec<TensorEntry>,
}

/// A symmetric `n × n` matrix, stored canonically (exactly symmetric).
#[derive(Debug, Clone, PartialEq)]
pub struct Sym2Tensor {
    m: DMatrix<f64>,
}

impl Sym2Tensor {
    /// Accepts a matrix symmetric to within `1e-12` relative and stores its upper triangle.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(CurvError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let asymmetry = (&m - m.transpose()).amax();
        if asymmetry > 1e-12 * m.amax().max(1.0) {
            return Err(CurvError::NotSymmetric { asymmetry });
        }
        Ok(Self::from_fn(m.nrows(), |i, j| m[(i.min(j), i.max(j))]))
    }

    /// Calls `f(i, j)` for `i <= j` only and mirrors.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self { m: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)) }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.m.dot(&other.m)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { m: &self.m * a }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `h − (tr h / n) g`.
    pub fn traceless_part(&self) -> TracelessSym2 {
        let n = self.n();
        let shift = self.trace() / n as f64;
        let m = &self.m - DMatrix::identity(n, n) * shift;
        TracelessSym2(Sym2Tensor::from_fn(n, |i, j| m[(i, j)]))
    }
}

/// A trace-free symmetric 2-tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct TracelessSym2(Sym2Tensor);

impl TracelessSym2 {
    pub fn new(s: Sym2Tensor) -> Result<Self> {
        let trace = s.trace();
        let tol = TRACE_TOL * (s.frobenius_norm() + 1.0);
        if trace.abs() > tol {
            return Err(CurvError::NotTraceFree { trace, tol });
        }
        Ok(Self(s))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Sym2Tensor::from_fn(n, |_, _| 0.0))
    }

    pub fn as_sym2(&self) -> &Sym2Tensor {
        &self.0
    }

    pub fn into_sym2(self) -> Sym2Tensor {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.0.matrix()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.matrix().norm_squared()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

/// `Ric_{ij} = Σ_k R_{kikj}`.
pub fn ricci(t: &CurvatureTensor) -> Sym2Tensor {
    let n = t.n();
    Sym2Tensor::from_fn(n, |i, j| (0..n).map(|k| t.get(k, i, k, j)).sum())
}

pub fn scalar(t: &CurvatureTensor) -> f64 {
    ricci(t).trace()
}

/// `E = Ric − (s/n) g`.
pub fn traceless_ricci(t: &CurvatureTensor) -> TracelessSym2 {
    ricci(t).traceless_part()
}

/// `(h ∧ k)_{ijkl} = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il`.
pub fn kulkarni_nomizu(h: &Sym2Tensor, k: &Sym2Tensor) -> Result<CurvatureTensor> {
    if h.n() != k.n() {
        return Err(CurvError::DimensionMismatch { expected: h.n(), found: k.n() });
    }
    check_dimension(h.n())?;
    Ok(CurvatureTensor::from_fn_unchecked(h.n(), |a, b, c, d| {
        h.get(a, c) * k.get(b, d) + h.get(b, d) * k.get(a, c) - h.get(a, d) * k.get(b, c) - h.get(b, c) * k.get(a, d)
    }))
}
