//! Curvature operators as matrices in orthonormal bases.
//!
//! * `R̂` acts on `Λ²V`: `(R̂ω)_{ab} = ½ Σ_{ij} R_{ijab} ω_{ij}`.
//! * `R̄` acts on `S²V`: `(R̄h)_{ab} = Σ_{cd} R_{acdb} h_{cd}`, the linear
//!   extension of `e_i ⊙ e_j ↦ Σ_{kl} R_{kijl} e_k ⊙ e_l`.
//! * `R̊` is `R̄` compressed to the trace-free subspace `S²₀V`.
//!
//! All bases are orthonormal for the Frobenius inner product, so every matrix
//! entry is `⟨op(B_α), B_β⟩_F`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::tensor::{CurvatureTensor, TracelessSym2};

/// Relative gap below which neighbouring eigenvalues are reported as one
/// multiplicity cluster. Reporting only; never used by any bound.
pub const DEGENERACY_GAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "lambda2")]
    Lambda2,
    #[serde(rename = "s2")]
    Sym2,
    #[serde(rename = "s2_0")]
    Sym2Traceless,
}

impl Domain {
    pub fn dim(self, n: usize) -> usize {
        match self {
            Domain::Lambda2 => n * (n - 1) / 2,
            Domain::Sym2 => n * (n + 1) / 2,
            Domain::Sym2Traceless => (n - 1) * (n + 2) / 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Domain::Lambda2 => "lambda2",
            Domain::Sym2 => "s2",
            Domain::Sym2Traceless => "s2_0",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An ordered orthonormal basis of `Λ²V`, `S²V` or `S²₀V`, as `n × n` matrices.
#[derive(Debug, Clone)]
pub struct Basis {
    n: usize,
    domain: Domain,
    elements: Vec<DMatrix<f64>>,
}

impl Basis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn elements(&self) -> &[DMatrix<f64>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Frobenius Gram matrix of the elements.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |a, b| self.elements[a].dot(&self.elements[b]))
    }

    /// Re-expresses the basis through an orthogonal change of coordinates
    /// `B'_α = Σ_β Q_{βα} B_β`.
    pub fn rebased(&self, q: &DMatrix<f64>) -> Result<Self> {
        let k = self.len();
        if q.nrows() != k || q.ncols() != k {
            return Err(CurvError::DimensionMismatch { expected: k, found: q.nrows() });
        }
        let elements = (0..k)
            .map(|a| {
                let mut m = DMatrix::zeros(self.n, self.n);
                for (b, e) in self.elements.iter().enumerate() {
                    m += e * q[(b, a)];
                }
                m
            })
            .collect();
        Ok(Self { n: self.n, domain: self.domain, elements })
    }

    /// Frobenius coordinates of `m` in this basis.
    pub fn coordinates_of(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(CurvError::DimensionMismatch { expected: self.n, found: m.nrows() });
        }
        Ok(self.elements.iter().map(|b| b.dot(m)).collect())
    }

    pub fn reconstruct(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        if coords.len() != self.len() {
            return Err(CurvError::DimensionMismatch { expected: self.len(), found: coords.len() });
        }
        let mut m = DMatrix::zeros(self.n, self.n);
        for (c, b) in coords.iter().zip(&self.elements) {
            m += b * *c;
        }
        Ok(m)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(CurvError::DimensionTooSmall { n, min: 2 });
    }
    Ok(())
}

fn off_diagonal(n: usize, sign: f64) -> Vec<DMatrix<f64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = DMatrix::zeros(n, n);
            m[(i, j)] = s;
            m[(j, i)] = sign * s;
            out.push(m);
        }
    }
    out
}

/// `(e_i ∧ e_j)/√2` for `i < j`, lexicographic.
pub fn basis_lambda2(n: usize) -> Result<Basis> {
    check_n(n)?;
    Ok(Basis { n, domain: Domain::Lambda2, elements: off_diagonal(n, -1.0) })
}

/// `(e_i ⊙ e_j)/√2` for `i < j`, followed by `½ e_i ⊙ e_i`.
pub fn basis_s2(n: usize) -> Result<Basis> {
    check_n(n)?;
    let mut elements = off_diagonal(n, 1.0);
    for i in 0..n {
        let mut m = DMatrix::zeros(n, n);
        m[(i, i)] = 1.0;
        elements.push(m);
    }
    Ok(Basis { n, domain: Domain::Sym2, elements })
}

/// `(e_i ⊙ e_j)/√2` for `i < j`, followed by the `n − 1` diagonal elements
/// `diag(1, …, 1, −k, 0, …, 0)/√(k(k+1))`, `k = 1, …, n − 1`.
pub fn basis_s2_traceless(n: usize) -> Result<Basis> {
    check_n(n)?;
    let mut elements = off_diagonal(n, 1.0);
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..k {
            m[(i, i)] = 1.0 / norm;
        }
        m[(k, k)] = -(k as f64) / norm;
        elements.push(m);
    }
    Ok(Basis { n, domain: Domain::Sym2Traceless, elements })
}

/// `(R̂ω)_{ab} = ½ Σ_{ij} R_{ijab} ω_{ij}`.
pub fn apply_first_kind(t: &CurvatureTensor, w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.n();
    DMatrix::from_fn(n, n, |a, b| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += t.get(i, j, a, b) * w[(i, j)];
            }
        }
        0.5 * acc
    })
}

/// `(R̄h)_{ab} = Σ_{cd} R_{acdb} h_{cd}`.
pub fn apply_bar(t: &CurvatureTensor, h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.n();
    DMatrix::from_fn(n, n, |a, b| {
        let mut acc = 0.0;
        for c in 0..n {
            for d in 0..n {
                acc += t.get(a, c, d, b) * h[(c, d)];
            }
        }
        acc
    })
}

/// A curvature operator in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    domain: Domain,
    n: usize,
    entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn from_entries(domain: Domain, n: usize, entries: DMatrix<f64>) -> Result<Self> {
        let dim = domain.dim(n);
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(CurvError::DimensionMismatch { expected: dim, found: entries.nrows() });
        }
        Ok(Self { domain, n, entries })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(CurvError::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        let v = nalgebra::DVector::from_column_slice(v);
        Ok(v.dot(&(&self.entries * &v)))
    }

    pub fn to_record(&self) -> OperatorRecord {
        OperatorRecord {
            n: self.n,
            domain: self.domain,
            dim: self.dim(),
            entries: self.entries.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

/// Dense JSON export of an operator matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub n: usize,
    pub domain: Domain,
    pub dim: usize,
    pub entries: Vec<Vec<f64>>,
}

fn gram_assemble(
    t: &CurvatureTensor,
    basis: &Basis,
    op: impl Fn(&CurvatureTensor, &DMatrix<f64>) -> DMatrix<f64>,
) -> OperatorMatrix {
    let k = basis.len();
    let images: Vec<DMatrix<f64>> = basis.elements().iter().map(|b| op(t, b)).collect();
    let entries = DMatrix::from_fn(k, k, |a, b| images[a].dot(&basis.elements()[b]));
    OperatorMatrix { domain: basis.domain(), n: t.n(), entries }
}

/// Matrix of `R̂` on `Λ²V` in [`basis_lambda2`]. Entry `((i,j),(k,l)) = R_{ijkl}`.
pub fn first_kind_matrix(t: &CurvatureTensor) -> OperatorMatrix {
    let basis = basis_lambda2(t.n()).expect("tensor dimension is at least 2");
    gram_assemble(t, &basis, apply_first_kind)
}

/// Matrix of `R̄` on all of `S²V` in [`basis_s2`].
pub fn bar_matrix(t: &CurvatureTensor) -> OperatorMatrix {
    let basis = basis_s2(t.n()).expect("tensor dimension is at least 2");
    gram_assemble(t, &basis, apply_bar)
}

/// Matrix of `R̊` on `S²₀V` in [`basis_s2_traceless`].
pub fn second_kind_matrix(t: &CurvatureTensor) -> OperatorMatrix {
    let basis = basis_s2_traceless(t.n()).expect("tensor dimension is at least 2");
    second_kind_matrix_in(t, &basis).expect("basis built for this dimension")
}

/// Matrix of `R̊` in an arbitrary orthonormal basis of `S²₀V`.
pub fn second_kind_matrix_in(t: &CurvatureTensor, basis: &Basis) -> Result<OperatorMatrix> {
    if basis.domain() != Domain::Sym2Traceless {
        return Err(CurvError::InvalidParameter(format!(
            "second-kind operator needs a trace-free basis, got {}",
            basis.domain()
        )));
    }
    if basis.n() != t.n() {
        return Err(CurvError::DimensionMismatch { expected: t.n(), found: basis.n() });
    }
    Ok(gram_assemble(t, basis, apply_bar))
}

/// Ascending eigenvalues of a curvature operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    degeneracy_tol: f64,
}

impl Spectrum {
    /// Sorts the given values ascending (stable).
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { eigenvalues: values, degeneracy_tol: DEGENERACY_GAP }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    /// Clusters of (representative value, multiplicity), ascending.
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some(last) if v - prev <= self.degeneracy_tol * scale => last.1 += 1,
                _ => out.push((v, 1)),
            }
            prev = v;
        }
        out
    }
}

/// Eigenvalues ascending with matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub vectors: DMatrix<f64>,
}

fn symmetric_input(m: &OperatorMatrix) -> Result<DMatrix<f64>> {
    let asymmetry = m.asymmetry();
    if asymmetry > 1e-12 * m.entries.amax().max(1.0) {
        return Err(CurvError::NotSymmetric { asymmetry });
    }
    Ok((&m.entries + m.entries.transpose()) * 0.5)
}

pub fn spectrum(m: &OperatorMatrix) -> Result<Spectrum> {
    let sym = symmetric_input(m)?;
    Ok(Spectrum::new(sym.symmetric_eigenvalues().iter().copied().collect()))
}

pub fn eigen_decomposition(m: &OperatorMatrix) -> Result<EigenDecomposition> {
    let sym = symmetric_input(m)?;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.dim(), m.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { spectrum: Spectrum { eigenvalues: values, degeneracy_tol: DEGENERACY_GAP }, vectors })
}

/// `⟨R̊E, E⟩ = Σ_{ijkl} R_{kijl} E_{kl} E_{ij}` by direct index contraction.
pub fn quad_form(t: &CurvatureTensor, e: &TracelessSym2) -> Result<f64> {
    let n = t.n();
    if e.n() != n {
        return Err(CurvError::DimensionMismatch { expected: n, found: e.n() });
    }
    let mut acc = 0.0;
    for k in 0..n {
        for l in 0..n {
            let ekl = e.get(k, l);
            if ekl == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    acc += t.get(k, i, j, l) * ekl * e.get(i, j);
                }
            }
        }
    }
    Ok(acc)
}

/// `E_α = ⟨E, S_α⟩_F` in a trace-free basis.
pub fn coordinates(e: &TracelessSym2, basis: &Basis) -> Result<Vec<f64>> {
    if basis.domain() != Domain::Sym2Traceless {
        return Err(CurvError::InvalidParameter(format!(
            "coordinates of a trace-free tensor need a trace-free basis, got {}",
            basis.domain()
        )));
    }
    basis.coordinates_of(e.matrix())
}

/// JSON export of a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub n: usize,
    pub domain: Domain,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
}

impl SpectrumRecord {
    pub fn new(n: usize, domain: Domain, spectrum: &Spectrum) -> Self {
        Self { n, domain, dim: spectrum.len(), eigenvalues: spectrum.values().to_vec() }
    }

    /// `n,domain,dim,λ_1,…,λ_dim`.
    pub fn csv_row(&self) -> String {
        let mut row = format!("{},{},{}", self.n, self.domain, self.dim);
        for v in &self.eigenvalues {
            row.push(',');
            row.push_str(&v.to_string());
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{kulkarni_nomizu, Sym2Tensor};

    fn sphere(n: usize, kappa: f64) -> CurvatureTensor {
        kulkarni_nomizu(&Sym2Tensor::identity(n), &Sym2Tensor::identity(n)).unwrap().scaled(kappa / 2.0)
    }

    fn assert_identity(m: &DMatrix<f64>, tol: f64) {
        let err = (m - DMatrix::identity(m.nrows(), m.ncols())).amax();
        assert!(err <= tol, "deviation from identity {err:e}");
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_lambda2(2).unwrap().len(), 1);
        assert_eq!(basis_lambda2(4).unwrap().len(), 6);
        assert_eq!(basis_s2_traceless(3).unwrap().len(), 5);
        assert_eq!(basis_s2_traceless(4).unwrap().len(), 9);
        assert_eq!(basis_s2(4).unwrap().len(), 10);
        assert!(basis_lambda2(1).is_err());
    }

    #[test]
    fn bases_are_orthonormal() {
        for n in 2..9 {
            assert_identity(&basis_lambda2(n).unwrap().gram(), 1e-12);
            assert_identity(&basis_s2(n).unwrap().gram(), 1e-12);
            let b = basis_s2_traceless(n).unwrap();
            assert_identity(&b.gram(), 1e-12);
            for e in b.elements() {
                assert!(e.trace().abs() <= 1e-14);
            }
        }
        let b = basis_lambda2(3).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert_eq!(b.elements()[x].dot(&b.elements()[y]), 0.0);
                }
            }
        }
    }

    #[test]
    fn space_form_operators_are_scalar() {
        let t = sphere(3, 1.0);
        assert_identity(first_kind_matrix(&t).entries(), 1e-14);
        assert_identity(second_kind_matrix(&t).entries(), 1e-14);
        for v in spectrum(&second_kind_matrix(&t)).unwrap().values() {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_tensor_gives_zero_operators() {
        let z = CurvatureTensor::zeros(4).unwrap();
        assert_eq!(first_kind_matrix(&z).entries().amax(), 0.0);
        assert_eq!(second_kind_matrix(&z).entries().amax(), 0.0);
        assert_eq!(spectrum(&second_kind_matrix(&z)).unwrap().values(), &[0.0; 9]);
    }

    #[test]
    fn spectrum_orders_ascending() {
        let m = OperatorMatrix::from_entries(
            Domain::Lambda2,
            3,
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0])),
        )
        .unwrap();
        let s = spectrum(&m).unwrap();
        assert_eq!(s.values(), &[-1.0, 2.0, 3.0]);
        let id = OperatorMatrix::from_entries(Domain::Sym2Traceless, 3, DMatrix::identity(5, 5)).unwrap();
        assert_eq!(spectrum(&id).unwrap().values(), &[1.0; 5]);
        assert_eq!(spectrum(&id).unwrap().multiplicities(), vec![(1.0, 5)]);
    }

    #[test]
    fn nonsymmetric_matrix_rejected() {
        let mut e = DMatrix::identity(3, 3);
        e[(0, 1)] = 1.0;
        let m = OperatorMatrix::from_entries(Domain::Lambda2, 3, e).unwrap();
        assert!(matches!(spectrum(&m), Err(CurvError::NotSymmetric { .. })));
        assert!(OperatorMatrix::from_entries(Domain::Lambda2, 3, DMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn coordinates_of_basis_element_are_unit_vector() {
        let b = basis_s2_traceless(4).unwrap();
        let s1 = TracelessSym2::new(Sym2Tensor::from_matrix(b.elements()[0].clone()).unwrap()).unwrap();
        let c = coordinates(&s1, &b).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-15);
        assert!(c[1..].iter().all(|v| *v == 0.0));
        let z = coordinates(&TracelessSym2::zeros(4), &b).unwrap();
        assert!(z.iter().all(|v| *v == 0.0));
        assert!(coordinates(&s1, &basis_s2(4).unwrap()).is_err());
        assert!(coordinates(&s1, &basis_s2_traceless(3).unwrap()).is_err());
    }

    #[test]
    fn quad_form_of_zero_and_sphere() {
        let t = sphere(4, 1.0);
        assert_eq!(quad_form(&t, &TracelessSym2::zeros(4)).unwrap(), 0.0);
        let e = Sym2Tensor::diagonal(&[1.0, -1.0, 0.0, 0.0]).traceless_part();
        let unit = TracelessSym2::new(e.as_sym2().scaled(1.0 / e.frobenius_norm())).unwrap();
        assert!((quad_form(&t, &unit).unwrap() - 1.0).abs() < 1e-14);
        assert!(quad_form(&t, &TracelessSym2::zeros(3)).is_err());
    }

    #[test]
    fn csv_row_layout() {
        let rec = SpectrumRecord::new(3, Domain::Sym2Traceless, &Spectrum::new(vec![1.0, 0.5]));
        assert_eq!(rec.csv_row(), "3,s2_0,2,0.5,1");
    }
}
