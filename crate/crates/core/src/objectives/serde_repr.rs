//! JSON file representation of objectives:
//! {"family": "...", "params": {...}, "domain": {"lower": [...], "upper": [...]}}
//!
//! Deserialization re-runs the structural builders, so loaded objectives carry
//! freshly derived metadata.

use super::{Activation, BoxDomain, Objective, ObjectiveKind};
use crate::error::Error;
use crate::linalg::Mat;
use crate::meanfield::SetFunctionModel;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
enum FamilyRepr {
    Quadratic {
        hess: Mat,
        linear: Vec<f64>,
        constant: f64,
    },
    Softmax {
        kernel: Mat,
    },
    CutMt {
        weights: Mat,
        directed: bool,
    },
    IsingMt {
        field: Vec<f64>,
        coupling: Mat,
    },
    FlidMt {
        weights: Mat,
        utility: Vec<f64>,
    },
    SetcoverMt {
        n: usize,
        credits: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    ModularMt {
        theta: Vec<f64>,
    },
    TableMt {
        n: usize,
        values: Vec<f64>,
    },
    SampledMt {
        model: SetFunctionModel,
        samples: usize,
        seed: u64,
    },
    Influence {
        activation: Activation,
        facility: Mat,
    },
    RevenueIe {
        weights: Mat,
        q: f64,
    },
    RevenueMixed {
        weights: Mat,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    Elbo {
        model: SetFunctionModel,
    },
    PaElbo {
        model_a: SetFunctionModel,
        model_b: SetFunctionModel,
        beta: f64,
    },
    Reflected {
        inner: Box<FileRepr>,
        signs: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct FileRepr {
    #[serde(flatten)]
    family: FamilyRepr,
    domain: BoxDomain,
}

fn model_to_family(model: &SetFunctionModel) -> FamilyRepr {
    match model.clone() {
        SetFunctionModel::Cut { weights, directed } => FamilyRepr::CutMt { weights, directed },
        SetFunctionModel::Ising { field, coupling } => FamilyRepr::IsingMt { field, coupling },
        SetFunctionModel::Flid { weights, utility } => FamilyRepr::FlidMt { weights, utility },
        SetFunctionModel::SetCover { n, credits, covers } => {
            FamilyRepr::SetcoverMt { n, credits, covers }
        }
        SetFunctionModel::Modular { theta } => FamilyRepr::ModularMt { theta },
        SetFunctionModel::Table { n, values } => FamilyRepr::TableMt { n, values },
    }
}

impl From<&Objective> for FileRepr {
    fn from(obj: &Objective) -> Self {
        let family = match obj.kind() {
            ObjectiveKind::Quadratic {
                hess,
                linear,
                constant,
            } => FamilyRepr::Quadratic {
                hess: hess.clone(),
                linear: linear.clone(),
                constant: *constant,
            },
            ObjectiveKind::Softmax { kernel } => FamilyRepr::Softmax {
                kernel: kernel.clone(),
            },
            ObjectiveKind::Multilinear { model } => model_to_family(model),
            ObjectiveKind::SampledMultilinear {
                model,
                samples,
                seed,
            } => FamilyRepr::SampledMt {
                model: model.clone(),
                samples: *samples,
                seed: *seed,
            },
            ObjectiveKind::Influence {
                activation,
                facility,
            } => FamilyRepr::Influence {
                activation: activation.clone(),
                facility: facility.clone(),
            },
            ObjectiveKind::RevenueIe { weights, q } => FamilyRepr::RevenueIe {
                weights: weights.clone(),
                q: *q,
            },
            ObjectiveKind::RevenueMixed {
                weights,
                alpha,
                beta,
                gamma,
            } => FamilyRepr::RevenueMixed {
                weights: weights.clone(),
                alpha: *alpha,
                beta: *beta,
                gamma: *gamma,
            },
            ObjectiveKind::Elbo { model } => FamilyRepr::Elbo {
                model: model.clone(),
            },
            ObjectiveKind::PaElbo {
                model_a,
                model_b,
                beta,
            } => FamilyRepr::PaElbo {
                model_a: model_a.clone(),
                model_b: model_b.clone(),
                beta: *beta,
            },
            ObjectiveKind::Reflected { inner, signs } => FamilyRepr::Reflected {
                inner: Box::new(FileRepr::from(&**inner)),
                signs: signs.clone(),
            },
        };
        FileRepr {
            family,
            domain: obj.domain().clone(),
        }
    }
}

impl TryFrom<FileRepr> for Objective {
    type Error = Error;

    fn try_from(repr: FileRepr) -> Result<Self, Error> {
        let domain = repr.domain;
        match repr.family {
            FamilyRepr::Quadratic {
                hess,
                linear,
                constant,
            } => Objective::quadratic(hess, linear, constant, domain),
            FamilyRepr::Softmax { kernel } => Objective::softmax(kernel, domain),
            FamilyRepr::CutMt { weights, directed } => {
                Objective::multilinear(SetFunctionModel::Cut { weights, directed }, domain)
            }
            FamilyRepr::IsingMt { field, coupling } => {
                Objective::multilinear(SetFunctionModel::Ising { field, coupling }, domain)
            }
            FamilyRepr::FlidMt { weights, utility } => {
                Objective::multilinear(SetFunctionModel::Flid { weights, utility }, domain)
            }
            FamilyRepr::SetcoverMt { n, credits, covers } => {
                Objective::multilinear(SetFunctionModel::SetCover { n, credits, covers }, domain)
            }
            FamilyRepr::ModularMt { theta } => {
                Objective::multilinear(SetFunctionModel::Modular { theta }, domain)
            }
            FamilyRepr::TableMt { n, values } => {
                Objective::multilinear(SetFunctionModel::Table { n, values }, domain)
            }
            FamilyRepr::SampledMt {
                model,
                samples,
                seed,
            } => Objective::sampled_multilinear(model, samples, seed, domain),
            FamilyRepr::Influence {
                activation,
                facility,
            } => Objective::influence(activation, facility, domain),
            FamilyRepr::RevenueIe { weights, q } => Objective::revenue_ie(weights, q, domain),
            FamilyRepr::RevenueMixed {
                weights,
                alpha,
                beta,
                gamma,
            } => Objective::revenue_mixed(weights, alpha, beta, gamma, domain),
            FamilyRepr::Elbo { model } => crate::meanfield::build_elbo(&model),
            FamilyRepr::PaElbo {
                model_a,
                model_b,
                beta,
            } => {
                let pa = crate::meanfield::PaModel::new(model_a, model_b, beta)?;
                crate::meanfield::build_pa_elbo(&pa)
            }
            FamilyRepr::Reflected { inner, signs } => {
                let inner = Objective::try_from(*inner)?;
                inner.orthant_reflect(&signs)
            }
        }
    }
}

impl Serialize for Objective {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FileRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Objective {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = FileRepr::deserialize(d)?;
        Objective::try_from(repr).map_err(serde::de::Error::custom)
    }
}
