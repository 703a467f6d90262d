//! Curvature operators of algebraic curvature tensors.
//!
//! Builds the curvature operators of the first and second kind from a
//! finite-dimensional curvature tensor, computes their spectra, evaluates
//! weighted eigenvalue sums and k-nonnegativity, and checks the eigenvalue
//! inequalities behind Einstein rigidity for manifolds with harmonic
//! curvature, one tensor at a time.

pub mod cli;
pub mod error;
pub mod fuzz;
pub mod models;
pub mod operators;
pub mod random;
pub mod tensor;
pub mod verifier;
pub mod weights;

pub use error::{CurvError, Result};
pub use models::{constant_curvature, fubini_study, product_spheres, ModelSpec};
pub use operators::{
    basis_lambda2, basis_s2, basis_s2_traceless, coordinates, first_kind_matrix, quad_form, second_kind_matrix,
    spectrum, Basis, Domain, OperatorMatrix, Spectrum,
};
pub use tensor::{kulkarni_nomizu, ricci, scalar, traceless_ricci, CurvatureTensor, Sym2Tensor, TracelessSym2};
pub use weights::{bound_for_m, greedy_min, is_k_nonnegative, is_k_positive, k_sum, WeightClass};
