//! Frank-Wolfe style solvers: the monotone greedy variant, the non-convex
//! variant with the minimum-gap output rule, the shrunken variant for the
//! non-monotone setting, and the two-phase wrapper.

use super::onedim::golden_max;
use super::{
    finite_gap, Certificate, InitKind, IterRecord, PhaseOutcome, SolveReport, SolverConfig,
    StepRule,
};
use crate::constraints::{contains, diameter, lmo, lmo_shrunken, Constraint, DownClosedPolytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::objectives::{Objective, Point};
use std::time::Instant;

/// Number of steps of size `gamma` (last one truncated) that sum to 1.
fn steps_to_one(gamma: f64) -> usize {
    ((1.0 / gamma) - 1e-9).ceil().max(1.0) as usize
}

fn start_point(obj: &Objective, constraint: &Constraint, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let n = constraint.dim();
    let x = match &cfg.init {
        InitKind::Default | InitKind::Zeros => constraint.lower(),
        InitKind::Ones => constraint.upper(),
        InitKind::UniformRandom => {
            let mut rng = crate::rng::SplitMix64::stream(cfg.seed, 0x1417);
            let lo = constraint.lower();
            let hi = constraint.upper();
            (0..n).map(|i| rng.uniform(lo[i], hi[i])).collect()
        }
        InitKind::Given { point } => point.clone(),
    };
    if !contains(constraint, &x, 1e-9) || !obj.domain().contains(&x, 1e-9) {
        return Err(Error::BadConstraint("start point is infeasible".into()));
    }
    Ok(x)
}

/// Greedy Frank-Wolfe for monotone DR-submodular maximization over a
/// down-closed constraint: moves along LMO vertices with steps summing to 1.
pub fn submodular_fw(
    obj: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    if !obj.meta().monotone {
        return Err(Error::NotMonotone);
    }
    if !obj.meta().dr {
        return Err(Error::NotDr);
    }
    if !constraint.is_down_closed() {
        return Err(Error::BadConstraint(
            "greedy FW needs a down-closed constraint".into(),
        ));
    }
    let n = constraint.dim();
    let mut x = vec![0.0; n];
    let mut trajectory = Vec::new();
    let k_max = cfg.iterations;
    let gamma_default = if k_max > 0 { 1.0 / k_max as f64 } else { 0.0 };
    let gamma_base = match cfg.step_rule {
        StepRule::Constant { gamma } => gamma,
        _ => gamma_default,
    };

    let mut t = 0.0;
    let mut k = 0usize;
    let total_steps = if k_max == 0 {
        0
    } else {
        steps_to_one(gamma_base)
    };
    while k < total_steps {
        let g = obj.grad(&x)?;
        let v = lmo(constraint, &g)?;
        let gap = dot(&v, &g) - dot(&x, &g);
        let last = k + 1 == total_steps;
        let gamma_k = if last { 1.0 - t } else { gamma_base };
        trajectory.push(IterRecord {
            k,
            t,
            x: Point(x.clone()),
            f: obj.eval(&x)?,
            gap: finite_gap(gap),
            gamma: gamma_k,
        });
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += gamma_k * vi;
        }
        t = if last { 1.0 } else { t + gamma_k };
        k += 1;
    }
    let g = obj.grad(&x)?;
    let v = lmo(constraint, &g)?;
    let final_gap = dot(&v, &g) - dot(&x, &g);
    let f_final = obj.eval(&x)?;
    trajectory.push(IterRecord {
        k,
        t,
        x: Point(x.clone()),
        f: f_final,
        gap: finite_gap(final_gap),
        gamma: 0.0,
    });

    let f_origin = obj.eval(&vec![0.0; n])?;
    let certificate = Certificate::MonotoneFrankWolfe {
        alpha: cfg.lmo_mult_error,
        delta: cfg.additive_error,
        lipschitz: cfg.lipschitz_override.or(obj.meta().lipschitz),
        diameter: diameter(constraint),
        iterations: k.max(1),
        f_origin,
    };
    Ok(SolveReport::assemble(
        "submodular-fw",
        trajectory,
        Point(x),
        f_final,
        finite_gap(final_gap),
        Some(certificate),
        started,
    ))
}

/// Frank-Wolfe for smooth non-convex maximization. Returns the iterate with
/// the smallest non-stationarity gap seen; stops early once the gap falls
/// below epsilon.
pub fn nonconvex_fw(
    obj: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    nonconvex_fw_inner(
        obj,
        constraint,
        cfg,
        cfg.iterations,
        cfg.epsilon,
        Instant::now(),
    )
}

fn nonconvex_fw_inner(
    obj: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
    k_max: usize,
    epsilon: f64,
    started: Instant,
) -> Result<SolveReport> {
    cfg.validate()?;
    if !obj.meta().differentiable {
        return Err(Error::NonDifferentiable);
    }
    let mut x = start_point(obj, constraint, cfg)?;
    let mut trajectory = Vec::new();
    let mut t = 0.0;
    for k in 0..=k_max {
        let f = obj.eval(&x)?;
        let g = obj.grad(&x)?;
        let v = lmo(constraint, &g)?;
        let d: Vec<f64> = v.iter().zip(&x).map(|(vi, xi)| vi - xi).collect();
        let gap = dot(&d, &g);
        let stop = gap <= epsilon || k == k_max;
        let gamma = if stop {
            0.0
        } else {
            fw_step(obj, cfg, &x, &d, gap, k)?
        };
        trajectory.push(IterRecord {
            k,
            t,
            x: Point(x.clone()),
            f,
            gap: finite_gap(gap),
            gamma,
        });
        if stop {
            break;
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += gamma * di;
        }
        t += gamma;
    }

    // Output rule: minimum recorded non-stationarity.
    let best = trajectory
        .iter()
        .min_by(|a, b| {
            let ga = a.gap.unwrap_or(f64::INFINITY);
            let gb = b.gap.unwrap_or(f64::INFINITY);
            ga.partial_cmp(&gb).unwrap()
        })
        .expect("non-empty trajectory");
    let (solution, solution_f, solution_gap) = (best.x.clone(), best.f, best.gap);
    let certificate = Certificate::StationaryHalf {
        gap: solution_gap.unwrap_or(f64::INFINITY),
    };
    Ok(SolveReport::assemble(
        "nonconvex-fw",
        trajectory.clone(),
        solution,
        solution_f,
        solution_gap,
        Some(certificate),
        started,
    ))
}

fn fw_step(
    obj: &Objective,
    cfg: &SolverConfig,
    x: &[f64],
    d: &[f64],
    gap: f64,
    k: usize,
) -> Result<f64> {
    let line_search = |obj: &Objective| -> Result<f64> {
        let probe = |gamma: f64| -> Result<f64> {
            let y: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + gamma * di).collect();
            obj.eval(&y)
        };
        let (gamma, _) = golden_max(probe, 0.0, 1.0, 1e-10)?;
        Ok(gamma)
    };
    match cfg.step_rule {
        StepRule::Constant { gamma } => Ok(gamma),
        StepRule::Oblivious => Ok(2.0 / (k as f64 + 2.0)),
        StepRule::Lipschitz => {
            let l = cfg
                .lipschitz_override
                .or(obj.meta().lipschitz)
                .ok_or(Error::MissingLipschitz)?;
            let dn = norm2(d);
            if dn <= 0.0 || l <= 0.0 {
                return Ok(1.0);
            }
            Ok((gap / (l * dn)).min(1.0))
        }
        StepRule::Adaptive { c } => Ok((c / (k as f64 + 1.0).sqrt()).min(1.0)),
        StepRule::Auto => match cfg.curvature_bound {
            // gap / C clipped at 1, the analyzed curvature rule.
            Some(curv) => Ok((gap / curv).min(1.0)),
            None => line_search(obj),
        },
        StepRule::LineSearch => line_search(obj),
    }
}

/// Shrunken Frank-Wolfe for non-monotone DR-submodular maximization: the LMO
/// is tightened by {v <= ubar - x} and every iterate must stay below the
/// geometric growth cap.
pub fn shrunken_fw(
    obj: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    if !obj.meta().dr {
        return Err(Error::NotDr);
    }
    if !constraint.is_down_closed() {
        return Err(Error::BadConstraint(
            "shrunken FW needs a down-closed constraint".into(),
        ));
    }
    let n = constraint.dim();
    let ubar = constraint.upper();
    let mut x = vec![0.0; n];
    let mut trajectory = Vec::new();
    let k_max = cfg.iterations;
    let gamma = if k_max > 0 { 1.0 / k_max as f64 } else { 0.0 };
    let mut t = 0.0;
    let mut k = 0usize;
    let total_steps = if k_max == 0 { 0 } else { steps_to_one(gamma) };
    while k < total_steps {
        let g = obj.grad(&x)?;
        let full_v = lmo(constraint, &g)?;
        let full_gap = dot(&full_v, &g) - dot(&x, &g);
        let cap: Vec<f64> = ubar
            .iter()
            .zip(&x)
            .map(|(u, xi)| (u - xi).max(0.0))
            .collect();
        let v = lmo_shrunken(constraint, &g, &cap)?;
        let last = k + 1 == total_steps;
        let gamma_k = if last { 1.0 - t } else { gamma };
        trajectory.push(IterRecord {
            k,
            t,
            x: Point(x.clone()),
            f: obj.eval(&x)?,
            gap: finite_gap(full_gap),
            gamma: gamma_k,
        });
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += gamma_k * vi;
        }
        t = if last { 1.0 } else { t + gamma_k };
        k += 1;
        // Growth cap: x_i <= ubar_i (1 - (1-gamma)^(t/gamma)).
        let shrink = 1.0 - (1.0 - gamma).powf(t / gamma);
        for (xi, ui) in x.iter().zip(&ubar) {
            if *xi > ui * shrink + 1e-9 {
                return Err(Error::GrowthCapExceeded);
            }
        }
    }
    let g = obj.grad(&x)?;
    let v = lmo(constraint, &g)?;
    let final_gap = dot(&v, &g) - dot(&x, &g);
    let f_final = obj.eval(&x)?;
    trajectory.push(IterRecord {
        k,
        t,
        x: Point(x.clone()),
        f: f_final,
        gap: finite_gap(final_gap),
        gamma: 0.0,
    });
    let certificate = Certificate::ShrunkenFrankWolfe {
        lipschitz: cfg.lipschitz_override.or(obj.meta().lipschitz),
        diameter: diameter(constraint),
        iterations: k.max(1),
    };
    Ok(SolveReport::assemble(
        "shrunken-fw",
        trajectory,
        Point(x),
        f_final,
        finite_gap(final_gap),
        Some(certificate),
        started,
    ))
}

/// Two-phase algorithm: a stationary point in P, then one in
/// Q = P ∩ {y <= ubar - x}; returns the better of the two.
pub fn two_phase(
    obj: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let started = Instant::now();
    if !constraint.is_down_closed() {
        return Err(Error::BadConstraint(
            "two-phase needs a down-closed constraint".into(),
        ));
    }
    let first = nonconvex_fw_inner(obj, constraint, cfg, cfg.iterations, cfg.epsilon, started)?;
    let x = first.solution.clone();

    let ubar = constraint.upper();
    let cap: Vec<f64> = ubar
        .iter()
        .zip(x.coords())
        .map(|(u, xi)| (u - xi).max(0.0))
        .collect();
    let shrunk = match constraint {
        Constraint::Box { lower, .. } => Constraint::Box {
            lower: lower.clone(),
            upper: cap,
        },
        Constraint::Polytope { polytope } => Constraint::polytope(DownClosedPolytope::new(
            polytope.matrix().clone(),
            polytope.rhs().to_vec(),
            cap,
        )?),
    };
    let mut second_cfg = cfg.clone();
    second_cfg.init = InitKind::Default;
    let second = nonconvex_fw_inner(
        obj,
        &shrunk,
        &second_cfg,
        cfg.iterations2.unwrap_or(cfg.iterations),
        cfg.epsilon2.unwrap_or(cfg.epsilon),
        started,
    )?;
    let z = second.solution.clone();

    let gap_first = first.solution_gap.unwrap_or(f64::INFINITY);
    let gap_second = second.solution_gap.unwrap_or(f64::INFINITY);
    let (solution, solution_f, solution_gap) = if first.solution_f >= second.solution_f {
        (x.clone(), first.solution_f, first.solution_gap)
    } else {
        (z.clone(), second.solution_f, second.solution_gap)
    };

    let mut trajectory = first.trajectory;
    let offset = trajectory.len();
    let t_offset = trajectory.last().map_or(0.0, |r| r.t);
    for mut rec in second.trajectory {
        rec.k += offset;
        rec.t += t_offset;
        trajectory.push(rec);
    }
    let mut report = SolveReport::assemble(
        "two-phase",
        trajectory,
        solution,
        solution_f,
        solution_gap,
        Some(Certificate::TwoPhaseQuarter {
            gap_first,
            gap_second,
        }),
        started,
    );
    report.phases = Some((
        PhaseOutcome {
            x,
            f: first.solution_f,
            gap: gap_first,
        },
        PhaseOutcome {
            x: z,
            f: second.solution_f,
            gap: gap_second,
        },
    ));
    Ok(report)
}
