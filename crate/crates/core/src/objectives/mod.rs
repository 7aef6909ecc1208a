//! Objective families: exact evaluation, gradients, partial derivatives,
//! one-dimensional restrictions and orthant reflection.

mod influence;
mod quadratic;
mod restrict;
mod revenue;
mod serde_repr;
mod softmax;

pub use influence::Activation;
pub use quadratic::quadratic_is_submodular;
pub use restrict::{Analytic1d, Restriction1d};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::meanfield::SetFunctionModel;
use crate::rng::counter_f64;
use serde::{Deserialize, Serialize};

/// Structural comparisons treat magnitudes below this as zero.
pub(crate) const EPS_STRUCT: f64 = 1e-12;

/// A point of the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// Axis-aligned box [lower, upper].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::StructuralViolation(
                    "box bounds must be finite".into(),
                ));
            }
            if l > u {
                return Err(Error::StructuralViolation(
                    "box needs lower <= upper".into(),
                ));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The unit cube \[0,1\]^n.
    pub fn unit(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            upper: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(xi, (l, u))| *xi >= l - tol && *xi <= u + tol)
    }

    fn is_within_unit_cube(&self) -> bool {
        self.lower.iter().all(|&l| l >= -EPS_STRUCT)
            && self.upper.iter().all(|&u| u <= 1.0 + EPS_STRUCT)
    }
}

/// Structural metadata attached to an objective at build time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveMeta {
    pub n: usize,
    pub monotone: bool,
    pub dr: bool,
    pub lipschitz: Option<f64>,
    pub strong_dr: f64,
    pub differentiable: bool,
}

/// Tagged objective family.
#[derive(Debug, Clone)]
pub enum ObjectiveKind {
    /// f(x) = 1/2 x' H x + h' x + c
    Quadratic {
        hess: Mat,
        linear: Vec<f64>,
        constant: f64,
    },
    /// f(x) = log det(diag(x)(L - I) + I)
    Softmax { kernel: Mat },
    /// Closed-form multilinear extension of a set-function model.
    Multilinear { model: SetFunctionModel },
    /// Seeded Monte-Carlo estimate of a multilinear extension.
    SampledMultilinear {
        model: SetFunctionModel,
        samples: usize,
        seed: u64,
    },
    /// Expected influence: facility-location extension composed with
    /// activation probabilities.
    Influence {
        activation: Activation,
        facility: Mat,
    },
    /// Influence-and-exploit revenue, sum_{i != j} W_ij (1 - q^{x_i}) q^{x_j}.
    RevenueIe { weights: Mat, q: f64 },
    /// Support-dependent revenue with root/linear/loss terms.
    RevenueMixed {
        weights: Mat,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// Multilinear extension plus binary entropies.
    Elbo { model: SetFunctionModel },
    /// beta-weighted pair of multilinear extensions plus binary entropies.
    PaElbo {
        model_a: SetFunctionModel,
        model_b: SetFunctionModel,
        beta: f64,
    },
    /// Inner objective precomposed with diag(signs).
    Reflected {
        inner: Box<Objective>,
        signs: Vec<f64>,
    },
}

/// An immutable objective over a box domain.
#[derive(Debug, Clone)]
pub struct Objective {
    kind: ObjectiveKind,
    domain: BoxDomain,
    meta: ObjectiveMeta,
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Binary entropy in nats with the 0 log 0 = 0 convention.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { p * p.ln() };
    -(term(x) + term(1.0 - x))
}

/// Logistic sigmoid.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl Objective {
    // ---- constructors -----------------------------------------------------

    pub fn quadratic(
        hess: Mat,
        linear: Vec<f64>,
        constant: f64,
        domain: BoxDomain,
    ) -> Result<Self> {
        quadratic::build(hess, linear, constant, domain)
    }

    pub fn softmax(kernel: Mat, domain: BoxDomain) -> Result<Self> {
        softmax::build(kernel, domain)
    }

    pub fn multilinear(model: SetFunctionModel, domain: BoxDomain) -> Result<Self> {
        model.validate()?;
        check_dims(model.ground_set_size(), domain.dim())?;
        if !domain.is_within_unit_cube() {
            return Err(Error::StructuralViolation(
                "multilinear extensions live on subsets of [0,1]^n".into(),
            ));
        }
        let meta = ObjectiveMeta {
            n: domain.dim(),
            monotone: multilinear_monotone(&model),
            dr: true,
            lipschitz: None,
            strong_dr: 0.0,
            differentiable: true,
        };
        Ok(Self {
            kind: ObjectiveKind::Multilinear { model },
            domain,
            meta,
        })
    }

    pub fn sampled_multilinear(
        model: SetFunctionModel,
        samples: usize,
        seed: u64,
        domain: BoxDomain,
    ) -> Result<Self> {
        model.validate()?;
        check_dims(model.ground_set_size(), domain.dim())?;
        if samples == 0 {
            return Err(Error::StructuralViolation(
                "sample count must be positive".into(),
            ));
        }
        if !domain.is_within_unit_cube() {
            return Err(Error::StructuralViolation(
                "multilinear extensions live on subsets of [0,1]^n".into(),
            ));
        }
        let meta = ObjectiveMeta {
            n: domain.dim(),
            monotone: false,
            dr: true,
            lipschitz: None,
            strong_dr: 0.0,
            differentiable: false,
        };
        Ok(Self {
            kind: ObjectiveKind::SampledMultilinear {
                model,
                samples,
                seed,
            },
            domain,
            meta,
        })
    }

    pub fn influence(activation: Activation, facility: Mat, domain: BoxDomain) -> Result<Self> {
        influence::build(activation, facility, domain)
    }

    pub fn revenue_ie(weights: Mat, q: f64, domain: BoxDomain) -> Result<Self> {
        revenue::build_ie(weights, q, domain)
    }

    pub fn revenue_mixed(
        weights: Mat,
        alpha: f64,
        beta: f64,
        gamma: f64,
        domain: BoxDomain,
    ) -> Result<Self> {
        revenue::build_mixed(weights, alpha, beta, gamma, domain)
    }

    pub(crate) fn elbo_unchecked(
        model: SetFunctionModel,
        domain: BoxDomain,
        meta: ObjectiveMeta,
    ) -> Self {
        Self {
            kind: ObjectiveKind::Elbo { model },
            domain,
            meta,
        }
    }

    pub(crate) fn pa_elbo_unchecked(
        model_a: SetFunctionModel,
        model_b: SetFunctionModel,
        beta: f64,
        domain: BoxDomain,
        meta: ObjectiveMeta,
    ) -> Self {
        Self {
            kind: ObjectiveKind::PaElbo {
                model_a,
                model_b,
                beta,
            },
            domain,
            meta,
        }
    }

    /// Fails with `StructuralViolation` unless the build-time analysis found
    /// the objective to be DR-submodular.
    pub fn require_dr(self) -> Result<Self> {
        if !self.meta.dr {
            return Err(Error::StructuralViolation(
                "DR-submodularity requested but the structural check failed".into(),
            ));
        }
        Ok(self)
    }

    // ---- accessors ---------------------------------------------------------

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn meta(&self) -> &ObjectiveMeta {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        self.meta.n
    }

    fn check_in_domain(&self, x: &[f64]) -> Result<()> {
        check_dims(self.dim(), x.len())?;
        if !self.domain.contains(x, 1e-12) {
            return Err(Error::OutOfDomain);
        }
        Ok(())
    }

    // ---- operations --------------------------------------------------------

    /// Exact value at x (seeded Monte-Carlo estimate for the sampled family).
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_in_domain(x)?;
        self.eval_unchecked(x)
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> Result<f64> {
        match &self.kind {
            ObjectiveKind::Quadratic {
                hess,
                linear,
                constant,
            } => Ok(0.5 * hess.quad_form(x) + crate::linalg::dot(linear, x) + constant),
            ObjectiveKind::Softmax { kernel } => softmax::eval(kernel, x),
            ObjectiveKind::Multilinear { model } => Ok(model.multilinear(x)),
            ObjectiveKind::SampledMultilinear {
                model,
                samples,
                seed,
            } => Ok(sampled_estimate(model, *samples, *seed, x)),
            ObjectiveKind::Influence {
                activation,
                facility,
            } => Ok(influence::eval(activation, facility, x)),
            ObjectiveKind::RevenueIe { weights, q } => Ok(revenue::eval_ie(weights, *q, x)),
            ObjectiveKind::RevenueMixed {
                weights,
                alpha,
                beta,
                gamma,
            } => Ok(revenue::eval_mixed(weights, *alpha, *beta, *gamma, x)),
            ObjectiveKind::Elbo { model } => {
                Ok(model.multilinear(x) + x.iter().copied().map(binary_entropy).sum::<f64>())
            }
            ObjectiveKind::PaElbo {
                model_a,
                model_b,
                beta,
            } => Ok(beta * (model_a.multilinear(x) + model_b.multilinear(x))
                + x.iter().copied().map(binary_entropy).sum::<f64>()),
            ObjectiveKind::Reflected { inner, signs } => {
                let y: Vec<f64> = x.iter().zip(signs).map(|(xi, s)| xi * s).collect();
                inner.eval_unchecked(&y)
            }
        }
    }

    /// Full gradient.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_in_domain(x)?;
        if !self.meta.differentiable {
            return Err(Error::NonDifferentiable);
        }
        self.grad_unchecked(x)
    }

    fn grad_unchecked(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.kind {
            ObjectiveKind::Quadratic { hess, linear, .. } => {
                let mut g = hess.matvec(x);
                for (gi, hi) in g.iter_mut().zip(linear) {
                    *gi += hi;
                }
                Ok(g)
            }
            ObjectiveKind::Softmax { kernel } => softmax::grad(kernel, x),
            ObjectiveKind::Multilinear { model } => Ok((0..x.len())
                .map(|i| model.multilinear_partial(x, i))
                .collect()),
            ObjectiveKind::Influence {
                activation,
                facility,
            } => Ok(influence::grad(activation, facility, x)),
            ObjectiveKind::RevenueIe { weights, q } => Ok(revenue::grad_ie(weights, *q, x)),
            ObjectiveKind::Elbo { model } => Ok((0..x.len())
                .map(|i| model.multilinear_partial(x, i) + entropy_derivative(x[i]))
                .collect()),
            ObjectiveKind::PaElbo {
                model_a,
                model_b,
                beta,
            } => Ok((0..x.len())
                .map(|i| {
                    beta * (model_a.multilinear_partial(x, i) + model_b.multilinear_partial(x, i))
                        + entropy_derivative(x[i])
                })
                .collect()),
            ObjectiveKind::Reflected { inner, signs } => {
                let y: Vec<f64> = x.iter().zip(signs).map(|(xi, s)| xi * s).collect();
                let g = inner.grad_unchecked(&y)?;
                Ok(g.into_iter().zip(signs).map(|(gi, s)| gi * s).collect())
            }
            ObjectiveKind::SampledMultilinear { .. } | ObjectiveKind::RevenueMixed { .. } => {
                Err(Error::NonDifferentiable)
            }
        }
    }

    /// Single partial derivative, without forming the full gradient.
    pub fn partial(&self, x: &[f64], i: usize) -> Result<f64> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.dim(),
            });
        }
        self.check_in_domain(x)?;
        if !self.meta.differentiable {
            return Err(Error::NonDifferentiable);
        }
        match &self.kind {
            ObjectiveKind::Quadratic { hess, linear, .. } => {
                Ok(crate::linalg::dot(hess.row(i), x) + linear[i])
            }
            ObjectiveKind::Multilinear { model } => Ok(model.multilinear_partial(x, i)),
            ObjectiveKind::Elbo { model } => {
                Ok(model.multilinear_partial(x, i) + entropy_derivative(x[i]))
            }
            ObjectiveKind::PaElbo {
                model_a,
                model_b,
                beta,
            } => Ok(
                beta * (model_a.multilinear_partial(x, i) + model_b.multilinear_partial(x, i))
                    + entropy_derivative(x[i]),
            ),
            ObjectiveKind::Influence {
                activation,
                facility,
            } => Ok(influence::partial(activation, facility, x, i)),
            ObjectiveKind::RevenueIe { weights, q } => Ok(revenue::partial_ie(weights, *q, x, i)),
            ObjectiveKind::Reflected { inner, signs } => {
                let y: Vec<f64> = x.iter().zip(signs).map(|(xi, s)| xi * s).collect();
                Ok(signs[i] * inner.partial(&y, i)?)
            }
            _ => Ok(self.grad_unchecked(x)?[i]),
        }
    }

    /// One-dimensional restriction u -> f(x with coordinate i set to u).
    pub fn restrict_1d(&self, x: &[f64], i: usize) -> Result<Restriction1d<'_>> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.dim(),
            });
        }
        self.check_in_domain(x)?;
        Ok(restrict::build(self, x, i))
    }

    /// Precomposes the objective with diag(alpha) and reflects the box.
    ///
    /// Quadratics are reflected in closed form (H' = A H A); a repeated
    /// reflection composes the sign vectors, so reflecting twice with the
    /// same signs returns the inner objective.
    pub fn orthant_reflect(&self, alpha: &[f64]) -> Result<Objective> {
        check_dims(self.dim(), alpha.len())?;
        if alpha.iter().any(|&a| a != 1.0 && a != -1.0) {
            return Err(Error::BadSignVector);
        }
        let reflected_domain = BoxDomain::new(
            self.domain
                .lower
                .iter()
                .zip(&self.domain.upper)
                .zip(alpha)
                .map(|((l, u), a)| (a * l).min(a * u))
                .collect(),
            self.domain
                .lower
                .iter()
                .zip(&self.domain.upper)
                .zip(alpha)
                .map(|((l, u), a)| (a * l).max(a * u))
                .collect(),
        )?;
        match &self.kind {
            ObjectiveKind::Quadratic {
                hess,
                linear,
                constant,
            } => {
                let n = self.dim();
                let mut h2 = Mat::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        h2.set(i, j, alpha[i] * alpha[j] * hess.get(i, j));
                    }
                }
                let lin: Vec<f64> = linear.iter().zip(alpha).map(|(h, a)| h * a).collect();
                Objective::quadratic(h2, lin, *constant, reflected_domain)
            }
            ObjectiveKind::Reflected { inner, signs } => {
                let composed: Vec<f64> = signs.iter().zip(alpha).map(|(s, a)| s * a).collect();
                if composed.iter().all(|&c| c == 1.0) {
                    return Ok((**inner).clone());
                }
                Ok(Objective {
                    meta: reflected_meta(inner.meta()),
                    kind: ObjectiveKind::Reflected {
                        inner: inner.clone(),
                        signs: composed,
                    },
                    domain: reflected_domain,
                })
            }
            _ => Ok(Objective {
                meta: reflected_meta(&self.meta),
                kind: ObjectiveKind::Reflected {
                    inner: Box::new(self.clone()),
                    signs: alpha.to_vec(),
                },
                domain: reflected_domain,
            }),
        }
    }
}

fn reflected_meta(inner: &ObjectiveMeta) -> ObjectiveMeta {
    ObjectiveMeta {
        n: inner.n,
        // Structural flags of a reflected non-quadratic are unknown in
        // general; the checkers decide.
        monotone: false,
        dr: false,
        lipschitz: inner.lipschitz,
        strong_dr: 0.0,
        differentiable: inner.differentiable,
    }
}

pub(crate) fn entropy_derivative(x: f64) -> f64 {
    if x <= 0.0 {
        f64::INFINITY
    } else if x >= 1.0 {
        f64::NEG_INFINITY
    } else {
        ((1.0 - x) / x).ln()
    }
}

fn multilinear_monotone(model: &SetFunctionModel) -> bool {
    match model {
        SetFunctionModel::Cut { .. } | SetFunctionModel::Table { .. } => false,
        SetFunctionModel::Ising { field, coupling } => {
            // Nondecreasing only when every marginal is; with non-positive
            // couplings that needs field_s + sum of couplings >= 0.
            (0..field.len()).all(|s| {
                let worst: f64 = (0..field.len())
                    .filter(|&t| t != s)
                    .map(|t| coupling.get(s.min(t), s.max(t)))
                    .sum();
                field[s] + worst >= 0.0
            })
        }
        SetFunctionModel::Flid { utility, .. } => utility.iter().all(|&u| u >= 0.0),
        SetFunctionModel::SetCover { .. } => true,
        SetFunctionModel::Modular { theta } => theta.iter().all(|&t| t >= 0.0),
    }
}

/// Mean of `samples` draws of F(S), S ~ prod Bernoulli(x_i). The j-th draw of
/// coordinate i depends only on (seed, j, i), so repeated calls at the same x
/// return the same estimate.
fn sampled_estimate(model: &SetFunctionModel, samples: usize, seed: u64, x: &[f64]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for j in 0..samples {
        let mut mask = 0u64;
        for (i, &xi) in x.iter().enumerate().take(n.min(64)) {
            if counter_f64(seed, j as u64, i as u64) < xi {
                mask |= 1 << i;
            }
        }
        total += model.value(mask);
    }
    total / samples as f64
}
