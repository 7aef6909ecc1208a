//! Expected influence of marketing strategies: a facility-location multilinear
//! extension composed with activation probabilities.

use super::{check_dims, BoxDomain, Objective, ObjectiveKind, ObjectiveMeta, EPS_STRUCT};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::meanfield::SetFunctionModel;
use serde::{Deserialize, Serialize};

/// How investments translate into per-user activation probabilities.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Activation {
    /// One action per user: a_i(x_i) = 1 - (1 - p_i)^{x_i}.
    Independent { probs: Vec<f64> },
    /// Actions-to-users bipartite probabilities (rows: actions, cols: users):
    /// a_t(x) = 1 - prod_s (1 - p_st)^{x_s}.
    Bipartite { probs: Mat },
}

impl Activation {
    pub fn input_dim(&self) -> usize {
        match self {
            Self::Independent { probs } => probs.len(),
            Self::Bipartite { probs } => probs.nrows(),
        }
    }

    pub fn user_count(&self) -> usize {
        match self {
            Self::Independent { probs } => probs.len(),
            Self::Bipartite { probs } => probs.ncols(),
        }
    }

    fn activations(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Independent { probs } => probs
                .iter()
                .zip(x)
                .map(|(&p, &xi)| 1.0 - (1.0 - p).powf(xi))
                .collect(),
            Self::Bipartite { probs } => (0..probs.ncols())
                .map(|t| {
                    let survive: f64 = (0..probs.nrows())
                        .map(|s| (1.0 - probs.get(s, t)).powf(x[s]))
                        .product();
                    1.0 - survive
                })
                .collect(),
        }
    }

    /// d a_t / d x_s = -ln(1 - p_st) * (1 - a_t); zero when there is no edge.
    fn jacobian_entry(&self, a: &[f64], t: usize, s: usize) -> f64 {
        let p = match self {
            Self::Independent { probs } => {
                if s != t {
                    return 0.0;
                }
                probs[s]
            }
            Self::Bipartite { probs } => probs.get(s, t),
        };
        if p <= 0.0 || p >= 1.0 {
            return 0.0;
        }
        -(1.0 - p).ln() * (1.0 - a[t])
    }
}

pub(super) fn build(activation: Activation, facility: Mat, domain: BoxDomain) -> Result<Objective> {
    check_dims(activation.input_dim(), domain.dim())?;
    check_dims(activation.user_count(), facility.nrows())?;
    let probs_ok = match &activation {
        Activation::Independent { probs } => probs.iter().all(|&p| (0.0..=1.0).contains(&p)),
        Activation::Bipartite { probs } => (0..probs.nrows())
            .all(|s| (0..probs.ncols()).all(|t| (0.0..=1.0).contains(&probs.get(s, t)))),
    };
    if !probs_ok {
        return Err(Error::StructuralViolation(
            "activation probabilities must be in [0,1]".into(),
        ));
    }
    for i in 0..facility.nrows() {
        if facility.row(i).iter().any(|&w| w < 0.0) {
            return Err(Error::StructuralViolation(
                "facility-location weights must be non-negative".into(),
            ));
        }
    }
    if domain.lower.iter().any(|&l| l < -EPS_STRUCT) {
        return Err(Error::StructuralViolation(
            "investments must be non-negative".into(),
        ));
    }
    let meta = ObjectiveMeta {
        n: domain.dim(),
        monotone: true,
        dr: true,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: true,
    };
    Ok(Objective {
        kind: ObjectiveKind::Influence {
            activation,
            facility,
        },
        domain,
        meta,
    })
}

fn facility_model(facility: &Mat) -> SetFunctionModel {
    SetFunctionModel::Flid {
        weights: facility.clone(),
        utility: vec![0.0; facility.nrows()],
    }
}

pub(super) fn eval(activation: &Activation, facility: &Mat, x: &[f64]) -> f64 {
    facility_model(facility).multilinear(&activation.activations(x))
}

pub(super) fn partial(activation: &Activation, facility: &Mat, x: &[f64], s: usize) -> f64 {
    let a = activation.activations(x);
    let model = facility_model(facility);
    (0..a.len())
        .map(|t| {
            let da = activation.jacobian_entry(&a, t, s);
            if da == 0.0 {
                0.0
            } else {
                model.multilinear_partial(&a, t) * da
            }
        })
        .sum()
}

pub(super) fn grad(activation: &Activation, facility: &Mat, x: &[f64]) -> Vec<f64> {
    let a = activation.activations(x);
    let model = facility_model(facility);
    let mt_partials: Vec<f64> = (0..a.len())
        .map(|t| model.multilinear_partial(&a, t))
        .collect();
    (0..x.len())
        .map(|s| {
            (0..a.len())
                .map(|t| mt_partials[t] * activation.jacobian_entry(&a, t, s))
                .sum()
        })
        .collect()
}
