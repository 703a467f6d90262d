//! Closed-form curvature tensors of benchmark geometries.

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::tensor::{kulkarni_nomizu, CurvatureTensor, Sym2Tensor};

/// `κ/2 · g∧g`, i.e. `R_{ijkl} = κ(δ_ik δ_jl − δ_il δ_jk)`.
pub fn constant_curvature(n: usize, kappa: f64) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(CurvError::DimensionTooSmall { n, min: 2 });
    }
    if !kappa.is_finite() {
        return Err(CurvError::InvalidParameter(format!("curvature must be finite, got {kappa}")));
    }
    let g = Sym2Tensor::identity(n);
    Ok(kulkarni_nomizu(&g, &g)?.scaled(kappa / 2.0))
}

/// Riemannian product `S^p(r1) × S^q(r2)`: constant curvature `1/r1²` on the
/// first `p` indices, `1/r2²` on the last `q`, no mixed components.
pub fn product_spheres(p: usize, q: usize, r1: f64, r2: f64) -> Result<CurvatureTensor> {
    if p < 2 || q < 2 {
        return Err(CurvError::InvalidParameter(format!("sphere factors need dimension >= 2, got p = {p}, q = {q}")));
    }
    if !(r1.is_finite() && r1 > 0.0 && r2.is_finite() && r2 > 0.0) {
        return Err(CurvError::InvalidParameter(format!("radii must be positive, got r1 = {r1}, r2 = {r2}")));
    }
    let n = p + q;
    let k1 = 1.0 / (r1 * r1);
    let k2 = 1.0 / (r2 * r2);
    let block = |i: usize| i < p;
    Ok(CurvatureTensor::from_fn_unchecked(n, |i, j, k, l| {
        let b = block(i);
        if block(j) != b || block(k) != b || block(l) != b {
            return 0.0;
        }
        let kappa = if b { k1 } else { k2 };
        let d = |a: usize, c: usize| if a == c { 1.0 } else { 0.0 };
        kappa * (d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }))
}

/// Standard complex structure on `ℝ^{2m}`: `J e_{2a} = e_{2a+1}`, as the
/// matrix `J_{ij} = ⟨J e_i, e_j⟩`.
fn complex_structure(i: usize, j: usize) -> f64 {
    if i / 2 != j / 2 {
        0.0
    } else if i.is_multiple_of(2) && j == i + 1 {
        1.0
    } else if i % 2 == 1 && j + 1 == i {
        -1.0
    } else {
        0.0
    }
}

/// Fubini–Study curvature of `ℂP^m`, holomorphic sectional curvature 4:
/// `R_{ijkl} = δ_ik δ_jl − δ_il δ_jk + J_ik J_jl − J_il J_jk + 2 J_ij J_kl`.
pub fn fubini_study(m: usize) -> Result<CurvatureTensor> {
    if m < 1 {
        return Err(CurvError::InvalidParameter("complex dimension must be >= 1".into()));
    }
    let n = 2 * m;
    let d = |a: usize, c: usize| if a == c { 1.0 } else { 0.0 };
    let j = complex_structure;
    Ok(CurvatureTensor::from_fn_unchecked(n, |a, b, c, e| {
        d(a, c) * d(b, e) - d(a, e) * d(b, c) + j(a, c) * j(b, e) - j(a, e) * j(b, c) + 2.0 * j(a, b) * j(c, e)
    }))
}

/// Model JSON schema, e.g. `{"model": "product_spheres", "p": 2, "q": 3, "r1": 1.0, "r2": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Constant { n: usize, kappa: f64 },
    ProductSpheres { p: usize, q: usize, r1: f64, r2: f64 },
    FubiniStudy { m: usize },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Constant { .. } => "constant",
            ModelSpec::ProductSpheres { .. } => "product_spheres",
            ModelSpec::FubiniStudy { .. } => "fubini_study",
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            ModelSpec::Constant { n, .. } => n,
            ModelSpec::ProductSpheres { p, q, .. } => p + q,
            ModelSpec::FubiniStudy { m } => 2 * m,
        }
    }

    pub fn build(&self) -> Result<CurvatureTensor> {
        match *self {
            ModelSpec::Constant { n, kappa } => constant_curvature(n, kappa),
            ModelSpec::ProductSpheres { p, q, r1, r2 } => product_spheres(p, q, r1, r2),
            ModelSpec::FubiniStudy { m } => fubini_study(m),
        }
    }

    /// Diagonal of the closed-form Ricci tensor (every model has diagonal Ricci).
    pub fn expected_ricci(&self) -> Vec<f64> {
        match *self {
            ModelSpec::Constant { n, kappa } => vec![(n as f64 - 1.0) * kappa; n],
            ModelSpec::ProductSpheres { p, q, r1, r2 } => {
                let mut v = vec![(p as f64 - 1.0) / (r1 * r1); p];
                v.extend(std::iter::repeat_n((q as f64 - 1.0) / (r2 * r2), q));
                v
            }
            ModelSpec::FubiniStudy { m } => vec![2.0 * m as f64 + 2.0; 2 * m],
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub parameters: String,
    pub description: String,
    pub example: ModelSpec,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "constant".into(),
            parameters: "n: integer >= 2, kappa: real".into(),
            description: "space form of constant sectional curvature kappa; Einstein, R̊ = kappa·id".into(),
            example: ModelSpec::Constant { n: 3, kappa: 1.0 },
        },
        CatalogEntry {
            name: "product_spheres".into(),
            parameters: "p, q: integers >= 2, r1, r2: positive reals".into(),
            description: "product of round spheres S^p(r1) x S^q(r2); parallel curvature, \
                          Einstein iff (p-1)/r1^2 = (q-1)/r2^2"
                .into(),
            example: ModelSpec::ProductSpheres { p: 2, q: 3, r1: 1.0, r2: 1.0 },
        },
        CatalogEntry {
            name: "fubini_study".into(),
            parameters: "m: integer >= 1 (real dimension 2m)".into(),
            description: "complex projective space with holomorphic sectional curvature 4; Ric = (2m+2) g".into(),
            example: ModelSpec::FubiniStudy { m: 2 },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{second_kind_matrix, spectrum};
    use crate::tensor::{ricci, scalar, traceless_ricci};

    #[test]
    fn space_form_data() {
        let t = constant_curvature(3, 1.0).unwrap();
        assert_eq!(ricci(&t), Sym2Tensor::identity(3).scaled(2.0));
        assert_eq!(scalar(&t), 6.0);
        assert_eq!(constant_curvature(5, 0.0).unwrap().sup_norm(), 0.0);
        let s = spectrum(&second_kind_matrix(&constant_curvature(4, 1.0).unwrap())).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(constant_curvature(1, 1.0).is_err());
    }

    #[test]
    fn product_data() {
        let t = product_spheres(2, 3, 1.0, 1.0).unwrap();
        assert_eq!(ricci(&t), Sym2Tensor::diagonal(&[1.0, 1.0, 2.0, 2.0, 2.0]));
        let e = traceless_ricci(&t);
        let want = [-0.6, -0.6, 0.4, 0.4, 0.4];
        for (i, w) in want.iter().enumerate() {
            assert!((e.get(i, i) - w).abs() < 1e-15);
        }
        assert!((e.norm_squared() - 1.2).abs() < 1e-14);

        let t = product_spheres(2, 2, 1.0, 1.0).unwrap();
        assert_eq!(ricci(&t), Sym2Tensor::identity(4));
        assert_eq!(scalar(&t), 4.0);
        let s = spectrum(&second_kind_matrix(&t)).unwrap();
        assert!(s.min() < -0.5);
    }

    #[test]
    fn product_rejects_bad_parameters() {
        assert!(product_spheres(1, 3, 1.0, 1.0).is_err());
        assert!(product_spheres(2, 3, 0.0, 1.0).is_err());
        assert!(product_spheres(2, 3, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn fubini_study_data() {
        let t = fubini_study(2).unwrap();
        assert!(t.symmetry_report().max_violation() == 0.0);
        assert_eq!(ricci(&t), Sym2Tensor::identity(4).scaled(6.0));
        assert_eq!(scalar(&t), 24.0);
        assert_eq!(t.get(0, 1, 0, 1), 4.0);
        assert_eq!(t.get(0, 2, 0, 2), 1.0);
        for m in 1..5 {
            assert!(traceless_ricci(&fubini_study(m).unwrap()).frobenius_norm() < 1e-14);
        }
        assert_eq!(fubini_study(1).unwrap(), constant_curvature(2, 4.0).unwrap());
        assert!(fubini_study(0).is_err());
    }

    #[test]
    fn expected_ricci_matches_contraction() {
        for entry in catalog() {
            let t = entry.example.build().unwrap();
            assert_eq!(ricci(&t), Sym2Tensor::diagonal(&entry.example.expected_ricci()));
        }
    }

    #[test]
    fn catalog_round_trips_through_json() {
        let names: Vec<_> = catalog().into_iter().map(|e| e.name).collect();
        assert_eq!(names, ["constant", "product_spheres", "fubini_study"]);
        for entry in catalog() {
            let json = serde_json::to_string(&entry.example).unwrap();
            assert_eq!(ModelSpec::from_json_str(&json).unwrap(), entry.example);
            assert_eq!(entry.example.name(), entry.name);
            assert!(entry.example.build().unwrap().symmetry_report().is_valid());
        }
        let spec =
            ModelSpec::from_json_str(r#"{"model": "product_spheres", "p": 2, "q": 3, "r1": 1.0, "r2": 1.0}"#).unwrap();
        assert_eq!(spec, ModelSpec::ProductSpheres { p: 2, q: 3, r1: 1.0, r2: 1.0 });
        assert!(ModelSpec::from_json_str(r#"{"model": "torus"}"#).is_err());
    }
}
