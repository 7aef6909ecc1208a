//! Projected gradient ascent with the best-iterate output rule.

use super::{finite_gap, Certificate, InitKind, IterRecord, SolveReport, SolverConfig, StepRule};
use crate::constraints::{contains, diameter, lmo, project, Constraint};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::objectives::{Objective, Point};
use std::time::Instant;

pub fn pga(obj: &Objective, constraint: &Constraint, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    if !obj.meta().differentiable {
        return Err(Error::NonDifferentiable);
    }
    let lipschitz = cfg.lipschitz_override.or(obj.meta().lipschitz);
    let mut x = match &cfg.init {
        InitKind::Default | InitKind::Zeros => constraint.lower(),
        InitKind::Ones => project(constraint, &constraint.upper())?,
        InitKind::UniformRandom => {
            let mut rng = crate::rng::SplitMix64::stream(cfg.seed, 0x1417);
            let (lo, hi) = (constraint.lower(), constraint.upper());
            let raw: Vec<f64> = (0..constraint.dim())
                .map(|i| rng.uniform(lo[i], hi[i]))
                .collect();
            project(constraint, &raw)?
        }
        InitKind::Given { point } => project(constraint, point)?,
    };
    if !contains(constraint, &x, 1e-9) {
        return Err(Error::BadConstraint("start point is infeasible".into()));
    }

    let mut trajectory = Vec::new();
    for k in 0..=cfg.iterations {
        let f = obj.eval(&x)?;
        let g = obj.grad(&x)?;
        let v = lmo(constraint, &g)?;
        let gap = dot(&v, &g) - dot(&x, &g);
        if k == cfg.iterations {
            trajectory.push(IterRecord {
                k,
                t: k as f64,
                x: Point(x.clone()),
                f,
                gap: finite_gap(gap),
                gamma: 0.0,
            });
            break;
        }
        let gamma = step_size(cfg, lipschitz, k)?;
        trajectory.push(IterRecord {
            k,
            t: k as f64,
            x: Point(x.clone()),
            f,
            gap: finite_gap(gap),
            gamma,
        });
        let y: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + gamma * gi).collect();
        x = project(constraint, &y)?;
    }

    // Output rule: iterate with the largest objective value.
    let best = trajectory
        .iter()
        .max_by(|a, b| a.f.partial_cmp(&b.f).unwrap())
        .expect("non-empty trajectory");
    let (solution, solution_f, solution_gap) = (best.x.clone(), best.f, best.gap);
    let certificate = Certificate::ProjectedAscent {
        lipschitz,
        diameter: diameter(constraint),
        iterations: cfg.iterations.max(1),
    };
    Ok(SolveReport::assemble(
        "pga",
        trajectory.clone(),
        solution,
        solution_f,
        solution_gap,
        Some(certificate),
        started,
    ))
}

fn step_size(cfg: &SolverConfig, lipschitz: Option<f64>, k: usize) -> Result<f64> {
    match cfg.step_rule {
        StepRule::Constant { gamma } => Ok(gamma),
        StepRule::Lipschitz => {
            let l = lipschitz.ok_or(Error::MissingLipschitz)?;
            if l <= 0.0 {
                return Ok(1.0);
            }
            Ok(1.0 / l)
        }
        StepRule::Adaptive { c } => Ok(c / (k as f64 + 1.0).sqrt()),
        StepRule::Auto => match lipschitz {
            Some(l) if l > 0.0 => Ok(1.0 / l),
            _ => Ok(1.0 / (k as f64 + 1.0).sqrt()),
        },
        StepRule::Oblivious => Ok(2.0 / (k as f64 + 2.0)),
        StepRule::LineSearch => Err(Error::StructuralViolation(
            "line search is not a projected-ascent rule".into(),
        )),
    }
}
