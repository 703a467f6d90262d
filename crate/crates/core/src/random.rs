//! Seeded generators for fuzzing: random symmetric and trace-free tensors,
//! random algebraic curvature tensors built from Kulkarni–Nomizu squares, and
//! random rotations.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor::{kulkarni_nomizu, CurvatureTensor, Sym2Tensor, TracelessSym2};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with i.i.d. standard normal upper triangle.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Sym2Tensor {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.sample(StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Sym2Tensor::from_matrix(m).expect("mirrored matrix is symmetric")
}

pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TracelessSym2 {
    random_symmetric(rng, n).traceless_part()
}

/// `Σ_a ε_a (h_a ∧ h_a)` with `ε = +1, −1, +1, …` and Gaussian `h_a`.
///
/// Deterministic in `seed`; every result satisfies the curvature symmetries by construction.
pub fn random_curvature(seed: u64, n: usize, terms: usize) -> Result<CurvatureTensor> {
    let mut rng = rng_from_seed(seed);
    random_curvature_with(&mut rng, n, terms)
}

pub fn random_curvature_with<R: Rng + ?Sized>(rng: &mut R, n: usize, terms: usize) -> Result<CurvatureTensor> {
    let mut acc = CurvatureTensor::zeros(n)?;
    for a in 0..terms.max(1) {
        let h = random_symmetric(rng, n);
        let square = kulkarni_nomizu(&h, &h)?;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&square.scaled(sign))?;
    }
    Ok(acc)
}

/// Haar-ish orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
