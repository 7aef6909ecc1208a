//! Coordinate-wise maximization and the double-greedy-initialized multi-epoch
//! mean-field solvers.

use super::onedim::maximize_1d;
use super::{
    dr_double_greedy, finite_gap, submodular_double_greedy, InitKind, IterRecord, SolveReport,
    SolverConfig,
};
use crate::constraints::{lmo, Constraint};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::objectives::{BoxDomain, Objective, Point};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleGreedyVariant {
    /// Initialize with the 1/3-approximate submodular double greedy.
    Third,
    /// Initialize with the 1/2-approximate DR double greedy.
    Half,
}

fn initial_point(boxc: &BoxDomain, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let n = boxc.dim();
    let x = match &cfg.init {
        InitKind::Default | InitKind::Zeros => boxc.lower.clone(),
        InitKind::Ones => boxc.upper.clone(),
        InitKind::UniformRandom => {
            let mut rng = SplitMix64::stream(cfg.seed, 0x1417);
            (0..n)
                .map(|i| rng.uniform(boxc.lower[i], boxc.upper[i]))
                .collect()
        }
        InitKind::Given { point } => point.clone(),
    };
    if !boxc.contains(&x, 1e-9) {
        return Err(Error::BadConstraint(
            "initializer is outside the box".into(),
        ));
    }
    Ok(x)
}

fn gap_on_box(obj: &Objective, boxc: &BoxDomain, x: &[f64]) -> Option<f64> {
    if !obj.meta().differentiable {
        return None;
    }
    let g = obj.grad(x).ok()?;
    let c = Constraint::Box {
        lower: boxc.lower.clone(),
        upper: boxc.upper.clone(),
    };
    let v = lmo(&c, &g).ok()?;
    finite_gap(dot(&v, &g) - dot(x, &g))
}

/// One epoch of coordinate maximization in the configured order. A coordinate
/// only moves on strict improvement, so the trajectory value never decreases.
fn sweep(
    obj: &Objective,
    x: &mut Vec<f64>,
    f_current: &mut f64,
    order: &[usize],
    tol: f64,
) -> Result<f64> {
    let mut max_move = 0.0f64;
    for &i in order {
        let r = obj.restrict_1d(x, i)?;
        let (u, f_best) = maximize_1d(&r, r.lo, r.hi, tol)?;
        if f_best > *f_current {
            max_move = max_move.max((u - x[i]).abs());
            x[i] = u;
            *f_current = f_best;
        }
    }
    Ok(max_move)
}

/// Coordinate ascent for `cfg.iterations` epochs from the configured
/// initializer. Trajectory records one entry per epoch.
pub fn coordinate_ascent(
    obj: &Objective,
    boxc: &BoxDomain,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    let mut x = initial_point(boxc, cfg)?;
    let mut f = obj.eval(&x)?;
    let order = cfg.order(boxc.dim());
    let mut trajectory = vec![IterRecord {
        k: 0,
        t: 0.0,
        x: Point(x.clone()),
        f,
        gap: gap_on_box(obj, boxc, &x),
        gamma: 0.0,
    }];
    for epoch in 1..=cfg.iterations {
        let moved = sweep(obj, &mut x, &mut f, &order, cfg.onedim_tolerance)?;
        trajectory.push(IterRecord {
            k: epoch,
            t: epoch as f64,
            x: Point(x.clone()),
            f,
            gap: gap_on_box(obj, boxc, &x),
            gamma: moved,
        });
    }
    let gap = trajectory.last().and_then(|r| r.gap);
    Ok(SolveReport::assemble(
        "coord-ascent",
        trajectory,
        Point(x),
        f,
        gap,
        None,
        started,
    ))
}

/// Double greedy followed by `cfg.iterations` coordinate-ascent epochs. The
/// certificate is inherited from the initializing epoch since coordinate
/// steps never decrease the value.
pub fn dg_meanfield(
    obj: &Objective,
    boxc: &BoxDomain,
    cfg: &SolverConfig,
    variant: DoubleGreedyVariant,
) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    let init_report = match variant {
        DoubleGreedyVariant::Third => submodular_double_greedy(obj, boxc, cfg)?,
        DoubleGreedyVariant::Half => dr_double_greedy(obj, boxc, cfg)?,
    };
    let algorithm = match variant {
        DoubleGreedyVariant::Third => "dg-meanfield-1/3",
        DoubleGreedyVariant::Half => "dg-meanfield-1/2",
    };
    let mut x = init_report.solution.0.clone();
    let mut f = init_report.solution_f;
    let order = cfg.order(boxc.dim());
    let mut trajectory = init_report.trajectory.clone();
    let offset = trajectory.len();
    for epoch in 0..cfg.iterations {
        let moved = sweep(obj, &mut x, &mut f, &order, cfg.onedim_tolerance)?;
        trajectory.push(IterRecord {
            k: offset + epoch,
            t: (offset + epoch) as f64,
            x: Point(x.clone()),
            f,
            gap: gap_on_box(obj, boxc, &x),
            gamma: moved,
        });
    }
    let gap = gap_on_box(obj, boxc, &x);
    let mut report = SolveReport::assemble(
        algorithm,
        trajectory,
        Point(x),
        f,
        gap,
        init_report.certificate.clone(),
        started,
    );
    report.coord_steps = init_report.coord_steps;
    Ok(report)
}
