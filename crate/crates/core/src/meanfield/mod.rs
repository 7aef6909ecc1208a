//! Mean-field inference for probabilistic log-submodular models: ELBO and
//! PA-ELBO objectives, exact partition functions at small n, and
//! supergradient upper bounds feeding the posterior-agreement lower bound.

mod models;

pub use models::{marginal_gain, SetFunctionModel};

use crate::error::{Error, Result};
use crate::objectives::{BoxDomain, Objective, ObjectiveMeta};
use crate::solvers::{dg_meanfield, DoubleGreedyVariant, SolverConfig};

/// Enumeration limit for exact partition computations.
const ENUM_LIMIT: usize = 20;

/// A pair of models over the same ground set with an inverse temperature.
#[derive(Debug, Clone)]
pub struct PaModel {
    pub model_a: SetFunctionModel,
    pub model_b: SetFunctionModel,
    pub beta: f64,
}

impl PaModel {
    pub fn new(model_a: SetFunctionModel, model_b: SetFunctionModel, beta: f64) -> Result<Self> {
        if model_a.ground_set_size() != model_b.ground_set_size() {
            return Err(Error::DimensionMismatch {
                expected: model_a.ground_set_size(),
                got: model_b.ground_set_size(),
            });
        }
        if !(beta > 0.0) {
            return Err(Error::StructuralViolation("beta must be positive".into()));
        }
        model_a.validate()?;
        model_b.validate()?;
        Ok(Self {
            model_a,
            model_b,
            beta,
        })
    }

    pub fn n(&self) -> usize {
        self.model_a.ground_set_size()
    }
}

fn require_tractable(model: &SetFunctionModel) -> Result<()> {
    if let SetFunctionModel::Table { n, .. } = model {
        if *n > ENUM_LIMIT {
            return Err(Error::TooLargeForTable);
        }
    }
    Ok(())
}

/// Multilinear extension plus binary entropies on \[0,1\]^n, in nats.
pub fn build_elbo(model: &SetFunctionModel) -> Result<Objective> {
    model.validate()?;
    require_tractable(model)?;
    let n = model.ground_set_size();
    let meta = ObjectiveMeta {
        n,
        monotone: false,
        dr: true,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: true,
    };
    Ok(Objective::elbo_unchecked(
        model.clone(),
        BoxDomain::unit(n),
        meta,
    ))
}

/// beta-weighted sum of both multilinear extensions plus binary entropies.
pub fn build_pa_elbo(pa: &PaModel) -> Result<Objective> {
    require_tractable(&pa.model_a)?;
    require_tractable(&pa.model_b)?;
    let n = pa.n();
    let meta = ObjectiveMeta {
        n,
        monotone: false,
        dr: true,
        lipschitz: None,
        strong_dr: 0.0,
        differentiable: true,
    };
    Ok(Objective::pa_elbo_unchecked(
        pa.model_a.clone(),
        pa.model_b.clone(),
        pa.beta,
        BoxDomain::unit(n),
        meta,
    ))
}

/// log sum_S exp(beta F(S)) by full enumeration with the max-shift trick.
pub fn log_partition_exact(model: &SetFunctionModel, beta: f64) -> Result<f64> {
    let n = model.ground_set_size();
    if n > ENUM_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUM_LIMIT,
        });
    }
    let mut shift = f64::NEG_INFINITY;
    for mask in 0u64..(1 << n) {
        shift = shift.max(beta * model.value(mask));
    }
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        total += (beta * model.value(mask) - shift).exp();
    }
    Ok(shift + total.ln())
}

/// log sum_S p_beta(S|D') p_beta(S|D'') with both posteriors normalized by
/// their exact partition functions.
pub fn log_pa_exact(pa: &PaModel) -> Result<f64> {
    let n = pa.n();
    if n > ENUM_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUM_LIMIT,
        });
    }
    let log_z_a = log_partition_exact(&pa.model_a, pa.beta)?;
    let log_z_b = log_partition_exact(&pa.model_b, pa.beta)?;
    let mut shift = f64::NEG_INFINITY;
    for mask in 0u64..(1 << n) {
        shift = shift.max(pa.beta * (pa.model_a.value(mask) + pa.model_b.value(mask)));
    }
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        total += (pa.beta * (pa.model_a.value(mask) + pa.model_b.value(mask)) - shift).exp();
    }
    Ok(shift + total.ln() - log_z_a - log_z_b)
}

/// Modular (bar supergradient) upper bound on log Z anchored at the set A:
/// beta F(A) - sum_{i in A} s_i + sum_i log(1 + e^{s_i}) where
/// s_i = beta F_{V - i}({i}) for i in A and beta F({i}) otherwise.
pub fn bar_supergradient_bound(model: &SetFunctionModel, beta: f64, anchor: u64) -> Result<f64> {
    let n = model.ground_set_size();
    if n < 64 && anchor >= 1u64 << n {
        return Err(Error::BadSet);
    }
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut bound = beta * model.value(anchor);
    for i in 0..n {
        let s_i = if anchor >> i & 1 == 1 {
            let rest = full & !(1 << i);
            beta * (model.value(rest | 1 << i) - model.value(rest))
        } else {
            beta * model.value(1 << i)
        };
        if anchor >> i & 1 == 1 {
            bound -= s_i;
        }
        bound += log1p_exp(s_i);
    }
    Ok(bound)
}

fn log1p_exp(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Lower bound on the log posterior-agreement objective: the mean-field
/// PA-ELBO value minus one modular upper bound per model.
///
/// Candidate anchor sets default to the empty set, the ground set, and the
/// 0.5-threshold of the PA-ELBO maximizer; every candidate yields a valid
/// upper bound, so the minimum over the collection is sound.
pub fn pa_lower_bound(
    pa: &PaModel,
    cfg: &SolverConfig,
    candidate_sets: Option<&[u64]>,
) -> Result<f64> {
    let objective = build_pa_elbo(pa)?;
    let report = dg_meanfield(
        &objective,
        objective.domain(),
        cfg,
        DoubleGreedyVariant::Half,
    )?;
    let n = pa.n();
    let full = (1u64 << n) - 1;

    let mut candidates: Vec<u64> = vec![0, full];
    let threshold: u64 = report
        .solution
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= 0.5)
        .map(|(i, _)| 1u64 << i)
        .sum();
    candidates.push(threshold);
    if let Some(extra) = candidate_sets {
        candidates.extend_from_slice(extra);
    }

    let mut ub_a = f64::INFINITY;
    let mut ub_b = f64::INFINITY;
    for &set in &candidates {
        ub_a = ub_a.min(bar_supergradient_bound(&pa.model_a, pa.beta, set)?);
        ub_b = ub_b.min(bar_supergradient_bound(&pa.model_b, pa.beta, set)?);
    }
    Ok(report.solution_f - ub_a - ub_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    fn cut_pair() -> SetFunctionModel {
        SetFunctionModel::Cut {
            weights: Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            directed: false,
        }
    }

    #[test]
    fn elbo_examples() {
        let ln2 = std::f64::consts::LN_2;
        let elbo = build_elbo(&cut_pair()).unwrap();
        assert!((elbo.eval(&[0.5, 0.5]).unwrap() - (0.5 + 2.0 * ln2)).abs() < 1e-12);

        let modular = build_elbo(&SetFunctionModel::Modular { theta: vec![0.0] }).unwrap();
        assert!((modular.eval(&[0.5]).unwrap() - ln2).abs() < 1e-15);

        // Pathology graph with c = 1, b = 10 at the stuck point.
        let mut w = Mat::zeros(4, 4);
        w.set(0, 1, 1.0);
        w.set(1, 2, 1.0);
        w.set(2, 3, 1.0);
        w.set(2, 1, 10.0);
        let patho = build_elbo(&SetFunctionModel::Cut {
            weights: w,
            directed: true,
        })
        .unwrap();
        assert!((patho.eval(&[0.5, 1.0, 0.0, 0.5]).unwrap() - (1.0 + 2.0 * ln2)).abs() < 1e-12);
    }

    #[test]
    fn pa_elbo_examples() {
        let theta = vec![0.7, -0.3];
        let m = SetFunctionModel::Modular {
            theta: theta.clone(),
        };
        let pa = PaModel::new(m.clone(), m.clone(), 1.0).unwrap();
        let obj = build_pa_elbo(&pa).unwrap();
        let x: Vec<f64> = theta
            .iter()
            .map(|&t| crate::objectives::sigmoid(2.0 * t))
            .collect();
        let expected: f64 = theta.iter().map(|&t| (1.0 + (2.0 * t).exp()).ln()).sum();
        assert!((obj.eval(&x).unwrap() - expected).abs() < 1e-12);

        // At a 0/1 vertex the entropy vanishes.
        let v = obj.eval(&[1.0, 0.0]).unwrap();
        assert!((v - 1.0 * (m.value(0b01) + m.value(0b01))).abs() < 1e-15);
    }

    #[test]
    fn pa_elbo_with_zero_second_model_matches_elbo() {
        let m = cut_pair();
        let zero = SetFunctionModel::Modular {
            theta: vec![0.0, 0.0],
        };
        let pa = PaModel::new(m.clone(), zero, 1.0).unwrap();
        let pa_obj = build_pa_elbo(&pa).unwrap();
        let elbo = build_elbo(&m).unwrap();
        for x in [[0.5, 0.5], [0.2, 0.9]] {
            assert!((pa_obj.eval(&x).unwrap() - elbo.eval(&x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn log_partition_examples() {
        let ln2 = std::f64::consts::LN_2;
        let m0 = SetFunctionModel::Modular { theta: vec![0.0] };
        assert!((log_partition_exact(&m0, 1.0).unwrap() - ln2).abs() < 1e-15);

        let m1 = SetFunctionModel::Modular {
            theta: vec![1.0, 1.0],
        };
        let expected = 2.0 * (1.0 + std::f64::consts::E).ln();
        assert!((log_partition_exact(&m1, 1.0).unwrap() - expected).abs() < 1e-12);

        let cut = cut_pair();
        let expected = (2.0 + 2.0 * std::f64::consts::E).ln();
        assert!((log_partition_exact(&cut, 1.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn log_pa_examples() {
        let m0 = SetFunctionModel::Modular { theta: vec![0.0] };
        let pa = PaModel::new(m0.clone(), m0, 1.0).unwrap();
        assert!((log_pa_exact(&pa).unwrap() - 0.5f64.ln()).abs() < 1e-14);

        // n = 1 with opposite fields: log(2 sigma(a) sigma(-a)).
        let a = 1.3;
        let pa = PaModel::new(
            SetFunctionModel::Modular { theta: vec![a] },
            SetFunctionModel::Modular { theta: vec![-a] },
            1.0,
        )
        .unwrap();
        let s = crate::objectives::sigmoid(a);
        let expected = (2.0 * s * (1.0 - s)).ln();
        assert!((log_pa_exact(&pa).unwrap() - expected).abs() < 1e-12);

        // Identical models: log sum of squared probabilities is <= 0.
        let cutpa = PaModel::new(cut_pair(), cut_pair(), 1.0).unwrap();
        assert!(log_pa_exact(&cutpa).unwrap() <= 0.0);
    }

    #[test]
    fn bar_bound_examples() {
        // Modular models make the bound tight at any anchor.
        let m = SetFunctionModel::Modular {
            theta: vec![0.4, -1.2, 0.3],
        };
        let exact = log_partition_exact(&m, 1.0).unwrap();
        for anchor in [0u64, 0b101, 0b111] {
            let b = bar_supergradient_bound(&m, 1.0, anchor).unwrap();
            assert!((b - exact).abs() < 1e-12);
        }

        let cut = cut_pair();
        let log_z = log_partition_exact(&cut, 1.0).unwrap();
        let e = std::f64::consts::E;
        let at_empty = bar_supergradient_bound(&cut, 1.0, 0).unwrap();
        assert!((at_empty - 2.0 * (1.0 + e).ln()).abs() < 1e-12);
        assert!(at_empty >= log_z);
        let at_full = bar_supergradient_bound(&cut, 1.0, 0b11).unwrap();
        assert!((at_full - (2.0 + 2.0 * (1.0 + 1.0 / e).ln())).abs() < 1e-12);
        assert!(at_full >= log_z);

        assert!(matches!(
            bar_supergradient_bound(&cut, 1.0, 0b100),
            Err(Error::BadSet)
        ));
    }

    #[test]
    fn pa_lower_bound_examples() {
        let ln2 = std::f64::consts::LN_2;
        let m = SetFunctionModel::Modular {
            theta: vec![0.0, 0.0],
        };
        let pa = PaModel::new(m.clone(), m, 1.0).unwrap();
        let cfg = SolverConfig::default();
        let bound = pa_lower_bound(&pa, &cfg, None).unwrap();
        assert!((bound - (-2.0 * ln2)).abs() < 1e-9);
        assert!((bound - log_pa_exact(&pa).unwrap()).abs() < 1e-9);

        let cutpa = PaModel::new(cut_pair(), cut_pair(), 1.0).unwrap();
        let bound = pa_lower_bound(&cutpa, &cfg, None).unwrap();
        assert!(bound <= log_pa_exact(&cutpa).unwrap() + 1e-6);
    }
}
