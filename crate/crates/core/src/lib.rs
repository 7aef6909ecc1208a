//! Maximization of continuous submodular and DR-submodular functions over
//! boxes and down-closed polytopes.
//!
//! The crate is organized around six pieces:
//!
//! * [`objectives`] — the objective families (quadratic, softmax, closed-form
//!   multilinear extensions, influence, revenue, entropy-regularized
//!   mean-field objectives, orthant reflections) with exact evaluation,
//!   gradients and one-dimensional restrictions.
//! * [`constraints`] — boxes and down-closed polytopes with linear
//!   maximization oracles (backed by a bounded-variable simplex), Euclidean
//!   projection and membership tests.
//! * [`solvers`] — the maximization algorithms: greedy Frank-Wolfe, non-convex
//!   Frank-Wolfe, projected gradient ascent, shrunken Frank-Wolfe, the
//!   two-phase wrapper, both double-greedy variants, coordinate ascent and
//!   the double-greedy-initialized mean-field loops, all emitting trajectories
//!   and guarantee certificates.
//! * [`meanfield`] — set-function models, ELBO / posterior-agreement
//!   objectives, exact log-partitions at small n, and modular upper bounds.
//! * [`verify`] — independent oracles: sampling checkers for
//!   submodularity/DR/monotonicity, finite differences, grid maximization,
//!   exhaustive multilinear sums, LP vertex enumeration, and the local-global
//!   audit.
//! * [`instances`] — instance generators, graph parsing, and run reports.

pub mod constraints;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod meanfield;
pub mod objectives;
pub mod rng;
pub mod solvers;
pub mod verify;

pub use constraints::{Constraint, DownClosedPolytope, LpSolution, LpStatus};
pub use error::{Error, Result};
pub use linalg::Mat;
pub use meanfield::{PaModel, SetFunctionModel};
pub use objectives::{Activation, BoxDomain, Objective, ObjectiveKind, ObjectiveMeta, Point};
pub use solvers::{
    Certificate, CoordinateOrder, DoubleGreedyVariant, InitKind, IterRecord, SolveReport,
    SolverConfig, StepRule,
};
pub use verify::CheckReport;
