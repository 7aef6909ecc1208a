//! Softmax extension log det(diag(x)(L - I) + I) for a PSD kernel L.

use super::{check_dims, BoxDomain, Objective, ObjectiveKind, ObjectiveMeta, EPS_STRUCT};
use crate::error::{Error, Result};
use crate::linalg::{lu_det, lu_inverse, Mat};
use nalgebra::DMatrix;

pub(super) fn build(kernel: Mat, domain: BoxDomain) -> Result<Objective> {
    let n = domain.dim();
    check_dims(n, kernel.nrows())?;
    check_dims(n, kernel.ncols())?;
    if !kernel.is_symmetric(1e-9) {
        return Err(Error::StructuralViolation(
            "softmax kernel must be symmetric".into(),
        ));
    }
    if kernel.min_eigenvalue_symmetric() < -1e-10 {
        return Err(Error::StructuralViolation(
            "softmax kernel must be positive semidefinite (eigenvalues >= -1e-10)".into(),
        ));
    }
    if domain.lower.iter().any(|&l| l < -EPS_STRUCT)
        || domain.upper.iter().any(|&u| u > 1.0 + EPS_STRUCT)
    {
        return Err(Error::StructuralViolation(
            "softmax extension lives on subsets of [0,1]^n".into(),
        ));
    }
    let meta = ObjectiveMeta {
        n,
        monotone: false,
        dr: true,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: true,
    };
    Ok(Objective {
        kind: ObjectiveKind::Softmax { kernel },
        domain,
        meta,
    })
}

fn inner_matrix(kernel: &Mat, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |i, j| {
        let lmi = kernel.get(i, j) - if i == j { 1.0 } else { 0.0 };
        x[i] * lmi + if i == j { 1.0 } else { 0.0 }
    })
}

pub(super) fn eval(kernel: &Mat, x: &[f64]) -> Result<f64> {
    let det = lu_det(&inner_matrix(kernel, x));
    if det.abs() <= 1e-300 {
        return Err(Error::SingularMatrix);
    }
    Ok(det.ln())
}

/// grad_i = (L - I) row i dotted with column i of the explicit inverse.
pub(super) fn grad(kernel: &Mat, x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    let m = inner_matrix(kernel, x);
    if lu_det(&m).abs() <= 1e-300 {
        return Err(Error::SingularMatrix);
    }
    let inv = lu_inverse(&m).ok_or(Error::SingularMatrix)?;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let lmi = kernel.get(i, j) - if i == j { 1.0 } else { 0.0 };
                    lmi * inv[(j, i)]
                })
                .sum()
        })
        .collect())
}
