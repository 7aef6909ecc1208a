//! Maximization algorithms with full trajectories and guarantee certificates.

mod coordinate;
mod double_greedy;
mod fw;
mod onedim;
mod pga;

pub use coordinate::{coordinate_ascent, dg_meanfield, DoubleGreedyVariant};
pub use double_greedy::{dr_double_greedy, submodular_double_greedy};
pub use fw::{nonconvex_fw, shrunken_fw, submodular_fw, two_phase};
pub use onedim::maximize_1d;
pub use pga::pga;

use crate::error::{Error, Result};
use crate::objectives::Point;
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

/// Step-size selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    /// The rule each solver analyzes: 1/K for the greedy Frank-Wolfe
    /// variants, exact line search for the non-convex one, 1/L (falling back
    /// to adaptive) for projected ascent.
    Auto,
    Constant {
        gamma: f64,
    },
    Oblivious,
    Lipschitz,
    Adaptive {
        c: f64,
    },
    LineSearch,
}

/// Starting point selection for solvers that accept one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "init", rename_all = "snake_case")]
pub enum InitKind {
    /// Solver default: the constraint's lower corner / origin.
    Default,
    Zeros,
    Ones,
    UniformRandom,
    Given {
        point: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateOrder {
    Natural,
    Random,
}

/// Shared solver configuration. Fields are interpreted per solver: `iterations`
/// is K for the Frank-Wolfe/ascent family and the epoch count for the
/// coordinate solvers; `iterations2`/`epsilon2` configure the second phase of
/// the two-phase algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub iterations: usize,
    pub iterations2: Option<usize>,
    pub step_rule: StepRule,
    pub epsilon: f64,
    pub epsilon2: Option<f64>,
    /// Multiplicative LMO error level recorded in certificates (the built-in
    /// oracle is exact, alpha = 1).
    pub lmo_mult_error: f64,
    /// Additive LMO error level recorded in certificates (0 for the exact
    /// oracle).
    pub additive_error: f64,
    pub curvature_bound: Option<f64>,
    pub onedim_tolerance: f64,
    /// Overrides the objective's Lipschitz constant for step rules.
    pub lipschitz_override: Option<f64>,
    pub seed: u64,
    pub coordinate_order: CoordinateOrder,
    pub init: InitKind,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            iterations: 50,
            iterations2: None,
            step_rule: StepRule::Auto,
            epsilon: 1e-6,
            epsilon2: None,
            lmo_mult_error: 1.0,
            additive_error: 0.0,
            curvature_bound: None,
            onedim_tolerance: 1e-10,
            lipschitz_override: None,
            seed: 0,
            coordinate_order: CoordinateOrder::Natural,
            init: InitKind::Default,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if let StepRule::Constant { gamma } = self.step_rule {
            if !(gamma > 0.0 && gamma <= 1.0) {
                return Err(Error::StructuralViolation(
                    "constant step must be in (0,1]".into(),
                ));
            }
        }
        if !(self.lmo_mult_error > 0.0 && self.lmo_mult_error <= 1.0) {
            return Err(Error::StructuralViolation(
                "lmo_mult_error must be in (0,1]".into(),
            ));
        }
        if self.additive_error < 0.0 {
            return Err(Error::StructuralViolation(
                "additive_error must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Coordinate processing order (one fixed order reused across epochs).
    pub(crate) fn order(&self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        if self.coordinate_order == CoordinateOrder::Random {
            let mut rng = SplitMix64::stream(self.seed, 0xC00D);
            for i in (1..n).rev() {
                let j = rng.below(i + 1);
                order.swap(i, j);
            }
        }
        order
    }
}

/// One trajectory entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    pub k: usize,
    /// Cumulative step size (FW family) or sweep counter (coordinate family).
    pub t: f64,
    pub x: Point,
    pub f: f64,
    /// Non-stationarity max_{v in Q} <v - x, grad f(x)>, when available.
    pub gap: Option<f64>,
    /// Step size taken from this iterate (0 for the terminal record).
    pub gamma: f64,
}

/// Per-coordinate internals of the double-greedy solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordStep {
    pub coord: usize,
    /// 1-D argmax and gain of the lower particle.
    pub u_lower: f64,
    pub gain_lower: f64,
    /// 1-D argmax and gain of the upper particle.
    pub u_upper: f64,
    pub gain_upper: f64,
    /// Value both particles take at this coordinate.
    pub value: f64,
}

/// Result of one phase of the two-phase algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseOutcome {
    pub x: Point,
    pub f: f64,
    pub gap: f64,
}

/// Named guarantee with the data needed to evaluate its right-hand side once
/// an oracle optimum is supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Certificate {
    /// rhs = (1 - e^-alpha) f* - L D^2 (1 + delta) / (2 K) + e^-alpha f(0)
    MonotoneFrankWolfe {
        alpha: f64,
        delta: f64,
        lipschitz: Option<f64>,
        diameter: f64,
        iterations: usize,
        f_origin: f64,
    },
    /// rhs = (f* - gap) / 2
    StationaryHalf { gap: f64 },
    /// rhs = f* / 2 - L D^2 / (2 K)
    ProjectedAscent {
        lipschitz: Option<f64>,
        diameter: f64,
        iterations: usize,
    },
    /// rhs = f* / 3 - (4 n / 3) delta
    DoubleGreedyThird { n: usize, delta: f64 },
    /// rhs = f* / 2 + (f_lower + f_upper) / 4 - 5 delta / 4
    DoubleGreedyHalf {
        f_lower: f64,
        f_upper: f64,
        delta: f64,
    },
    /// rhs = (f* - gap_first - gap_second) / 4
    TwoPhaseQuarter { gap_first: f64, gap_second: f64 },
    /// rhs = f* / e - L D^2 / (2 K)
    ShrunkenFrankWolfe {
        lipschitz: Option<f64>,
        diameter: f64,
        iterations: usize,
    },
}

impl Certificate {
    /// Evaluates the guaranteed lower bound given an oracle optimum. Returns
    /// None when the expression needs an unknown Lipschitz constant.
    pub fn rhs(&self, f_star: f64) -> Option<f64> {
        match self {
            Certificate::MonotoneFrankWolfe {
                alpha,
                delta,
                lipschitz,
                diameter,
                iterations,
                f_origin,
            } => {
                let l = (*lipschitz)?;
                let k = (*iterations).max(1) as f64;
                Some(
                    (1.0 - (-alpha).exp()) * f_star
                        - l * diameter * diameter * (1.0 + delta) / (2.0 * k)
                        + (-alpha).exp() * f_origin,
                )
            }
            Certificate::StationaryHalf { gap } => Some(0.5 * (f_star - gap)),
            Certificate::ProjectedAscent {
                lipschitz,
                diameter,
                iterations,
            } => {
                let l = (*lipschitz)?;
                let k = (*iterations).max(1) as f64;
                Some(0.5 * f_star - diameter * diameter * l / (2.0 * k))
            }
            Certificate::DoubleGreedyThird { n, delta } => {
                Some(f_star / 3.0 - 4.0 * (*n as f64) * delta / 3.0)
            }
            Certificate::DoubleGreedyHalf {
                f_lower,
                f_upper,
                delta,
            } => Some(0.5 * f_star + 0.25 * (f_lower + f_upper) - 1.25 * delta),
            Certificate::TwoPhaseQuarter {
                gap_first,
                gap_second,
            } => Some(0.25 * (f_star - gap_first - gap_second)),
            Certificate::ShrunkenFrankWolfe {
                lipschitz,
                diameter,
                iterations,
            } => {
                let l = (*lipschitz)?;
                let k = (*iterations).max(1) as f64;
                Some(f_star / std::f64::consts::E - l * diameter * diameter / (2.0 * k))
            }
        }
    }

    /// The symbolic right-hand side with f* left free.
    pub fn expression(&self) -> String {
        match self {
            Certificate::MonotoneFrankWolfe { .. } => {
                "(1 - e^-alpha) f* - L D^2 (1 + delta) / (2 K) + e^-alpha f(0)".into()
            }
            Certificate::StationaryHalf { .. } => "(f* - gap) / 2".into(),
            Certificate::ProjectedAscent { .. } => "f*/2 - L D^2 / (2 K)".into(),
            Certificate::DoubleGreedyThird { .. } => "f*/3 - (4 n / 3) delta".into(),
            Certificate::DoubleGreedyHalf { .. } => {
                "f*/2 + (f(lower) + f(upper)) / 4 - 5 delta / 4".into()
            }
            Certificate::TwoPhaseQuarter { .. } => "(f* - gap_P - gap_Q) / 4".into(),
            Certificate::ShrunkenFrankWolfe { .. } => "f*/e - L D^2 / (2 K)".into(),
        }
    }
}

/// A finished solve: trajectory, output solution, and certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub trajectory: Vec<IterRecord>,
    /// The algorithm's output per its own output rule.
    pub solution: Point,
    pub solution_f: f64,
    pub solution_gap: Option<f64>,
    /// Best iterate by objective value over the whole trajectory.
    pub best_x: Point,
    pub best_f: f64,
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coord_steps: Vec<CoordStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<(PhaseOutcome, PhaseOutcome)>,
    pub wallclock_seconds: f64,
}

impl SolveReport {
    pub(crate) fn assemble(
        algorithm: &str,
        trajectory: Vec<IterRecord>,
        solution: Point,
        solution_f: f64,
        solution_gap: Option<f64>,
        certificate: Option<Certificate>,
        started: std::time::Instant,
    ) -> Self {
        let (mut best_f, mut best_x) = (f64::NEG_INFINITY, solution.clone());
        for rec in &trajectory {
            if rec.f > best_f {
                best_f = rec.f;
                best_x = rec.x.clone();
            }
        }
        if solution_f > best_f {
            best_f = solution_f;
            best_x = solution.clone();
        }
        Self {
            algorithm: algorithm.into(),
            trajectory,
            solution,
            solution_f,
            solution_gap,
            best_x,
            best_f,
            certificate,
            coord_steps: Vec::new(),
            phases: None,
            wallclock_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// Keep only finite gaps; entropy terms can push boundary gradients to
/// infinity, which JSON cannot carry.
pub(crate) fn finite_gap(g: f64) -> Option<f64> {
    g.is_finite().then_some(g)
}
