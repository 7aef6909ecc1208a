//! Quadratic objectives f(x) = 1/2 x'Hx + h'x + c with structural analysis.

use super::{check_dims, BoxDomain, Objective, ObjectiveKind, ObjectiveMeta, EPS_STRUCT};
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub(super) fn build(
    hess: Mat,
    linear: Vec<f64>,
    constant: f64,
    domain: BoxDomain,
) -> Result<Objective> {
    let n = domain.dim();
    check_dims(n, hess.nrows())?;
    check_dims(n, hess.ncols())?;
    check_dims(n, linear.len())?;
    if !hess.is_symmetric(EPS_STRUCT) {
        return Err(Error::StructuralViolation(
            "quadratic H must be symmetric".into(),
        ));
    }
    let meta = analyze(&hess, &linear, &domain);
    Ok(Objective {
        kind: ObjectiveKind::Quadratic {
            hess,
            linear,
            constant,
        },
        domain,
        meta,
    })
}

fn analyze(hess: &Mat, linear: &[f64], domain: &BoxDomain) -> ObjectiveMeta {
    let n = domain.dim();
    let mut off_diag_nonpos = true;
    let mut all_nonpos = true;
    for i in 0..n {
        for j in 0..n {
            let h = hess.get(i, j);
            if h > EPS_STRUCT {
                all_nonpos = false;
                if i != j {
                    off_diag_nonpos = false;
                }
            }
        }
    }
    // Minimum of the affine gradient over the box, per coordinate. The
    // comparison tolerance scales with the accumulated magnitude so large
    // cancelling sums (h = -H'u constructions) stay monotone.
    let monotone = (0..n).all(|i| {
        let mut g = linear[i];
        let mut scale = 1.0 + linear[i].abs();
        for j in 0..n {
            let h = hess.get(i, j);
            let term = (h * domain.lower[j]).min(h * domain.upper[j]);
            g += term;
            scale += term.abs();
        }
        g >= -1e-12 * scale
    });
    let _ = off_diag_nonpos; // submodularity alone is not carried in the meta
    ObjectiveMeta {
        n,
        monotone,
        dr: all_nonpos,
        lipschitz: Some(hess.spectral_norm_symmetric()),
        strong_dr: 0.0,
        differentiable: true,
    }
}

/// True when every off-diagonal Hessian entry is non-positive (continuous
/// submodularity of a quadratic); used by tests and the checker truth table.
pub fn quadratic_is_submodular(hess: &Mat) -> bool {
    let n = hess.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || hess.get(i, j) <= EPS_STRUCT))
}
