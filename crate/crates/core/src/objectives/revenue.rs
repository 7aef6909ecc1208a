//! Revenue objectives: the influence-and-exploit family and the
//! support-dependent mixed family.

use super::{check_dims, BoxDomain, Objective, ObjectiveKind, ObjectiveMeta, EPS_STRUCT};
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub(super) fn build_ie(weights: Mat, q: f64, domain: BoxDomain) -> Result<Objective> {
    let n = domain.dim();
    check_dims(n, weights.nrows())?;
    check_dims(n, weights.ncols())?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::StructuralViolation(
            "revenue parameter q must lie in (0,1)".into(),
        ));
    }
    for i in 0..n {
        if weights.get(i, i) != 0.0 {
            return Err(Error::StructuralViolation(
                "revenue weights need a zero diagonal".into(),
            ));
        }
        for j in 0..n {
            if weights.get(i, j) < 0.0 {
                return Err(Error::NegativeWeight);
            }
        }
    }
    if domain.lower.iter().any(|&l| l < -EPS_STRUCT) {
        return Err(Error::StructuralViolation(
            "revenue assignments must be non-negative".into(),
        ));
    }
    // Submodular but not coordinate-wise concave on general boxes: the
    // diagonal curvature changes sign, so the DR flag stays off and the
    // checkers report.
    let meta = ObjectiveMeta {
        n,
        monotone: false,
        dr: false,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: true,
    };
    Ok(Objective {
        kind: ObjectiveKind::RevenueIe { weights, q },
        domain,
        meta,
    })
}

pub(super) fn eval_ie(weights: &Mat, q: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let pow: Vec<f64> = x.iter().map(|&xi| q.powf(xi)).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += weights.get(i, j) * (1.0 - pow[i]) * pow[j];
            }
        }
    }
    total
}

pub(super) fn partial_ie(weights: &Mat, q: f64, x: &[f64], k: usize) -> f64 {
    let n = x.len();
    let lnq = q.ln();
    let pow: Vec<f64> = x.iter().map(|&xi| q.powf(xi)).collect();
    let mut outgoing = 0.0; // d/dx_k of (1 - q^{x_k}) sum_j W_kj q^{x_j}
    let mut incoming = 0.0; // d/dx_k of q^{x_k} sum_i W_ik (1 - q^{x_i})
    for j in 0..n {
        if j != k {
            outgoing += weights.get(k, j) * pow[j];
            incoming += weights.get(j, k) * (1.0 - pow[j]);
        }
    }
    -lnq * pow[k] * outgoing + lnq * pow[k] * incoming
}

pub(super) fn grad_ie(weights: &Mat, q: f64, x: &[f64]) -> Vec<f64> {
    (0..x.len()).map(|k| partial_ie(weights, q, x, k)).collect()
}

pub(super) fn build_mixed(
    weights: Mat,
    alpha: f64,
    beta: f64,
    gamma: f64,
    domain: BoxDomain,
) -> Result<Objective> {
    let n = domain.dim();
    check_dims(n, weights.nrows())?;
    check_dims(n, weights.ncols())?;
    if !weights.is_symmetric(0.0) {
        return Err(Error::StructuralViolation(
            "mixed revenue weights must be symmetric".into(),
        ));
    }
    for i in 0..n {
        for j in 0..n {
            if weights.get(i, j) < 0.0 {
                return Err(Error::NegativeWeight);
            }
        }
    }
    if alpha < 0.0 || beta < 0.0 || gamma < 0.0 {
        return Err(Error::StructuralViolation(
            "mixed revenue coefficients must be non-negative".into(),
        ));
    }
    if domain.lower.iter().any(|&l| l < -EPS_STRUCT) {
        return Err(Error::StructuralViolation(
            "revenue assignments must be non-negative".into(),
        ));
    }
    // Discontinuous on the support boundary: not differentiable, handled by
    // the grid-based 1-D maximizer.
    let meta = ObjectiveMeta {
        n,
        monotone: false,
        dr: false,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: false,
    };
    Ok(Objective {
        kind: ObjectiveKind::RevenueMixed {
            weights,
            alpha,
            beta,
            gamma,
        },
        domain,
        meta,
    })
}

/// alpha * sum_{s: x_s = 0} sqrt(sum_{t: x_t != 0} x_t w_st)
/// + beta * sum_{t: x_t != 0} w_tt x_t + gamma * sum_{t: x_t != 0} (-x_t)
pub(super) fn eval_mixed(weights: &Mat, alpha: f64, beta: f64, gamma: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for s in 0..n {
        if x[s] == 0.0 {
            let inside: f64 = (0..n)
                .filter(|&t| x[t] != 0.0)
                .map(|t| x[t] * weights.get(s, t))
                .sum();
            total += alpha * inside.sqrt();
        }
    }
    for t in 0..n {
        if x[t] != 0.0 {
            total += beta * weights.get(t, t) * x[t];
            total -= gamma * x[t];
        }
    }
    total
}
