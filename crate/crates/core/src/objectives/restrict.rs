//! One-dimensional restrictions u -> f(x with coordinate i set to u).

use super::{Objective, ObjectiveKind};
use crate::error::Result;

/// Structure the 1-D maximizer can exploit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analytic1d {
    /// Nothing known beyond point evaluation.
    Opaque,
    /// f(u) = a2 u^2 + a1 u + const along the coordinate.
    Quadratic { a2: f64, a1: f64 },
    /// Entropy-regularized coordinate: the exact maximizer is sigmoid(arg)
    /// clipped to the interval.
    SigmoidArg(f64),
}

/// A univariate restriction of an objective over [lo, hi].
pub struct Restriction1d<'a> {
    obj: &'a Objective,
    base: Vec<f64>,
    coord: usize,
    pub lo: f64,
    pub hi: f64,
    /// True when the family is concave along this coordinate, so the
    /// restriction is unimodal on [lo, hi].
    pub unimodal: bool,
    pub analytic: Analytic1d,
}

impl<'a> Restriction1d<'a> {
    pub fn eval(&self, u: f64) -> Result<f64> {
        let mut point = self.base.clone();
        point[self.coord] = u;
        self.obj.eval_unchecked(&point)
    }

    pub fn coord(&self) -> usize {
        self.coord
    }
}

pub(super) fn build<'a>(obj: &'a Objective, x: &[f64], i: usize) -> Restriction1d<'a> {
    let (unimodal, analytic) = classify(obj, x, i);
    Restriction1d {
        obj,
        base: x.to_vec(),
        coord: i,
        lo: obj.domain().lower[i],
        hi: obj.domain().upper[i],
        unimodal,
        analytic,
    }
}

fn classify(obj: &Objective, x: &[f64], i: usize) -> (bool, Analytic1d) {
    match obj.kind() {
        ObjectiveKind::Quadratic { hess, linear, .. } => {
            let hii = hess.get(i, i);
            let cross: f64 = (0..x.len())
                .filter(|&j| j != i)
                .map(|j| hess.get(i, j) * x[j])
                .sum();
            (
                hii <= super::EPS_STRUCT,
                Analytic1d::Quadratic {
                    a2: 0.5 * hii,
                    a1: cross + linear[i],
                },
            )
        }
        ObjectiveKind::Softmax { .. } => (true, Analytic1d::Opaque),
        ObjectiveKind::Multilinear { model } => (
            true,
            // Multilinear extensions are affine along every coordinate.
            Analytic1d::Quadratic {
                a2: 0.0,
                a1: model.multilinear_partial(x, i),
            },
        ),
        ObjectiveKind::SampledMultilinear { .. } => (false, Analytic1d::Opaque),
        ObjectiveKind::Influence { .. } => (true, Analytic1d::Opaque),
        ObjectiveKind::RevenueIe { .. } => (false, Analytic1d::Opaque),
        ObjectiveKind::RevenueMixed { .. } => (false, Analytic1d::Opaque),
        ObjectiveKind::Elbo { model } => (
            true,
            Analytic1d::SigmoidArg(model.multilinear_partial(x, i)),
        ),
        ObjectiveKind::PaElbo {
            model_a,
            model_b,
            beta,
        } => (
            true,
            Analytic1d::SigmoidArg(
                beta * (model_a.multilinear_partial(x, i) + model_b.multilinear_partial(x, i)),
            ),
        ),
        ObjectiveKind::Reflected { inner, signs } => {
            let y: Vec<f64> = x.iter().zip(signs).map(|(xi, s)| xi * s).collect();
            let (unimodal, inner_analytic) = classify(inner, &y, i);
            let analytic = match inner_analytic {
                // f(u) = g(alpha_i u): even term unchanged, odd term flips.
                Analytic1d::Quadratic { a2, a1 } => Analytic1d::Quadratic {
                    a2,
                    a1: a1 * signs[i],
                },
                _ => Analytic1d::Opaque,
            };
            (unimodal, analytic)
        }
    }
}
