//! Independent oracles and property checkers: sampling-based falsifiers for
//! submodularity/DR/monotonicity, finite differences, exhaustive grid and
//! multilinear oracles, LP vertex enumeration, and the local-global audit.
//!
//! A "pass" verdict means no violation was found in the requested number of
//! seeded trials; reports carry the seed for replay.

use crate::constraints::{contains, Constraint};
use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::meanfield::SetFunctionModel;
use crate::objectives::{Objective, ObjectiveKind, Point};
use crate::rng::SplitMix64;
use crate::solvers::SolveReport;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Outcome of a property check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub pass: bool,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Largest violation observed (<= tol on pass).
    pub worst_violation: f64,
    /// Points witnessing the worst violation, when the check failed.
    pub witness: Option<Vec<Point>>,
}

impl CheckReport {
    fn from_worst(
        property: &str,
        trials: usize,
        tol: f64,
        seed: u64,
        worst: f64,
        witness: Vec<Vec<f64>>,
    ) -> Self {
        let pass = worst <= tol;
        CheckReport {
            property: property.into(),
            pass,
            trials,
            tol,
            seed,
            worst_violation: worst.max(0.0),
            witness: if pass {
                None
            } else {
                Some(witness.into_iter().map(Point).collect())
            },
        }
    }
}

struct Sampler<'a> {
    obj: &'a Objective,
    rng: SplitMix64,
}

impl<'a> Sampler<'a> {
    fn new(obj: &'a Objective, seed: u64, stream: u64) -> Self {
        Self {
            obj,
            rng: SplitMix64::stream(seed, stream),
        }
    }

    fn point(&mut self) -> Vec<f64> {
        let d = self.obj.domain();
        (0..d.dim())
            .map(|i| self.rng.uniform(d.lower[i], d.upper[i]))
            .collect()
    }

    /// A point below `b` (componentwise).
    fn below(&mut self, b: &[f64]) -> Vec<f64> {
        let d = self.obj.domain();
        b.iter()
            .enumerate()
            .map(|(i, &bi)| self.rng.uniform(d.lower[i], bi))
            .collect()
    }
}

fn set_coord(x: &[f64], i: usize, v: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[i] = v;
    y
}

/// Weak diminishing returns: increments along a coordinate where the two
/// ordered points agree gain at least as much at the smaller point. For
/// differentiable objectives the off-diagonal Hessian signs are sampled by
/// finite differences as well.
pub fn check_weak_dr(obj: &Objective, trials: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    let mut s = Sampler::new(obj, seed, 1);
    let n = obj.dim();
    let mut worst = 0.0f64;
    let mut witness = Vec::new();
    for _ in 0..trials {
        let b = s.point();
        let mut a = s.below(&b);
        let i = s.rng.below(n);
        a[i] = b[i];
        let headroom = obj.domain().upper[i] - b[i];
        let k = s.rng.next_f64() * headroom;
        let lhs = obj.eval(&set_coord(&a, i, a[i] + k))? - obj.eval(&a)?;
        let rhs = obj.eval(&set_coord(&b, i, b[i] + k))? - obj.eval(&b)?;
        let violation = rhs - lhs;
        if violation > worst {
            worst = violation;
            witness = vec![a.clone(), b.clone(), set_coord(&a, i, a[i] + k)];
        }
    }
    if obj.meta().differentiable && n >= 2 {
        let (w, wit) = sample_cross_partials(obj, &mut s, trials, tol)?;
        if w > worst {
            worst = w;
            witness = wit;
        }
    }
    Ok(CheckReport::from_worst(
        "weak-dr", trials, tol, seed, worst, witness,
    ))
}

fn sample_cross_partials(
    obj: &Objective,
    s: &mut Sampler<'_>,
    trials: usize,
    tol: f64,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let n = obj.dim();
    let h = 1e-4;
    let mut worst = 0.0f64;
    let mut witness = Vec::new();
    for _ in 0..trials {
        let mut x = s.point();
        // Keep the stencil inside the box.
        for i in 0..n {
            let (lo, hi) = (obj.domain().lower[i], obj.domain().upper[i]);
            if hi - lo < 2.0 * h {
                return Ok((worst, witness));
            }
            x[i] = x[i].clamp(lo, hi - h);
        }
        let i = s.rng.below(n);
        let mut j = s.rng.below(n);
        if j == i {
            j = (j + 1) % n;
        }
        let f00 = obj.eval(&x)?;
        let f10 = obj.eval(&set_coord(&x, i, x[i] + h))?;
        let f01 = obj.eval(&set_coord(&x, j, x[j] + h))?;
        let f11 = obj.eval(&set_coord(&set_coord(&x, i, x[i] + h), j, x[j] + h))?;
        let cross = (f11 - f10 - f01 + f00) / (h * h);
        // Finite differencing leaves O(h) truncation plus cancellation noise.
        let violation = cross - (1e-3 * (1.0 + f00.abs())).max(tol);
        if violation > worst {
            worst = violation;
            witness = vec![x.clone()];
        }
    }
    Ok((worst, witness))
}

/// Full DR property: the weak-DR inequality without the agreement
/// restriction, coordinate-wise concavity, and (when differentiable) the
/// antitone gradient map.
pub fn check_dr(obj: &Objective, trials: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    let mut s = Sampler::new(obj, seed, 2);
    let n = obj.dim();
    let mut worst = 0.0f64;
    let mut witness = Vec::new();
    for _ in 0..trials {
        // DR inequality on ordered pairs.
        let b = s.point();
        let a = s.below(&b);
        let i = s.rng.below(n);
        let headroom = obj.domain().upper[i] - b[i];
        let k = s.rng.next_f64() * headroom;
        let lhs = obj.eval(&set_coord(&a, i, a[i] + k))? - obj.eval(&a)?;
        let rhs = obj.eval(&set_coord(&b, i, b[i] + k))? - obj.eval(&b)?;
        if rhs - lhs > worst {
            worst = rhs - lhs;
            witness = vec![a.clone(), b.clone()];
        }

        // Coordinate-wise concavity.
        let x = s.point();
        let j = s.rng.below(n);
        let room = obj.domain().upper[j] - x[j];
        let k1 = s.rng.next_f64() * room;
        let l1 = s.rng.next_f64() * (room - k1).max(0.0);
        let gain_near = obj.eval(&set_coord(&x, j, x[j] + k1))? - obj.eval(&x)?;
        let gain_far = obj.eval(&set_coord(&x, j, x[j] + k1 + l1))?
            - obj.eval(&set_coord(&x, j, x[j] + l1))?;
        if gain_far - gain_near > worst {
            worst = gain_far - gain_near;
            witness = vec![x.clone()];
        }

        // Antitone gradients on ordered pairs.
        if obj.meta().differentiable {
            let ga = obj.grad(&a)?;
            let gb = obj.grad(&b)?;
            for t in 0..n {
                let violation = gb[t] - ga[t];
                if violation.is_finite() && violation > worst {
                    worst = violation;
                    witness = vec![a.clone(), b.clone()];
                }
            }
        }
    }
    Ok(CheckReport::from_worst(
        "dr", trials, tol, seed, worst, witness,
    ))
}

/// 0th-order lattice submodularity f(x) + f(y) >= f(x v y) + f(x ^ y);
/// needs evaluation only, so it also covers the non-smooth revenue family.
pub fn check_submodular_0th(
    obj: &Objective,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let mut s = Sampler::new(obj, seed, 3);
    let mut worst = 0.0f64;
    let mut witness = Vec::new();
    for _ in 0..trials {
        let x = s.point();
        let y = s.point();
        let join: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.max(*b)).collect();
        let meet: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.min(*b)).collect();
        let violation = obj.eval(&join)? + obj.eval(&meet)? - obj.eval(&x)? - obj.eval(&y)?;
        if violation > worst {
            worst = violation;
            witness = vec![x, y];
        }
    }
    Ok(CheckReport::from_worst(
        "submodular",
        trials,
        tol,
        seed,
        worst,
        witness,
    ))
}

/// Monotone nondecreasing on ordered pairs.
pub fn check_monotone(obj: &Objective, trials: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    let mut s = Sampler::new(obj, seed, 4);
    let mut worst = 0.0f64;
    let mut witness = Vec::new();
    for _ in 0..trials {
        let b = s.point();
        let a = s.below(&b);
        let violation = obj.eval(&a)? - obj.eval(&b)?;
        if violation > worst {
            worst = violation;
            witness = vec![a, b];
        }
    }
    Ok(CheckReport::from_worst(
        "monotone", trials, tol, seed, worst, witness,
    ))
}

/// DR-submodularity on the orthant lattice selected by the sign vector:
/// checked as plain DR after reflection, with witnesses mapped back to the
/// original coordinates.
pub fn check_alpha_dr(
    obj: &Objective,
    alpha: &[f64],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let reflected = obj.orthant_reflect(alpha)?;
    let mut report = check_dr(&reflected, trials, tol, seed)?;
    report.property = "alpha-dr".into();
    if let Some(witness) = &mut report.witness {
        for p in witness.iter_mut() {
            for (v, a) in p.0.iter_mut().zip(alpha) {
                *v *= a;
            }
        }
    }
    Ok(report)
}

/// Finite-difference gradient with per-coordinate one-sided fallback flags.
#[derive(Debug, Clone)]
pub struct FdGrad {
    pub values: Vec<f64>,
    /// True where the central stencil did not fit and a one-sided difference
    /// was used instead.
    pub one_sided: Vec<bool>,
}

pub fn finite_diff_grad(obj: &Objective, x: &[f64], h: f64) -> Result<FdGrad> {
    let n = obj.dim();
    let mut values = vec![0.0; n];
    let mut one_sided = vec![false; n];
    for i in 0..n {
        let (lo, hi) = (obj.domain().lower[i], obj.domain().upper[i]);
        let up_ok = x[i] + h <= hi;
        let down_ok = x[i] - h >= lo;
        values[i] = if up_ok && down_ok {
            (obj.eval(&set_coord(x, i, x[i] + h))? - obj.eval(&set_coord(x, i, x[i] - h))?)
                / (2.0 * h)
        } else if up_ok {
            one_sided[i] = true;
            (obj.eval(&set_coord(x, i, x[i] + h))? - obj.eval(x)?) / h
        } else if down_ok {
            one_sided[i] = true;
            (obj.eval(x)? - obj.eval(&set_coord(x, i, x[i] - h))?) / h
        } else {
            one_sided[i] = true;
            0.0
        };
    }
    Ok(FdGrad { values, one_sided })
}

/// Exhaustive maximization over a regular grid of the constraint's bounding
/// box, filtered by membership. Ties break lexicographically. Quadratics use
/// an incremental inner-axis update so resolution-201 sweeps in four
/// dimensions stay affordable.
pub fn grid_max(
    obj: &Objective,
    constraint: &Constraint,
    resolution: usize,
) -> Result<(Point, f64)> {
    let n = constraint.dim();
    if n > 4 {
        return Err(Error::TooHighDimensional(n));
    }
    if resolution < 2 {
        return Err(Error::MalformedInput(
            "grid resolution must be at least 2".into(),
        ));
    }
    if n == 0 {
        return Err(Error::MalformedInput("empty constraint".into()));
    }
    let lower = match constraint {
        Constraint::Box { lower, .. } => lower.clone(),
        Constraint::Polytope { .. } => vec![0.0; n],
    };
    let upper = constraint.upper();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..resolution)
                .map(|idx| {
                    if idx == resolution - 1 {
                        upper[i]
                    } else {
                        lower[i] + (upper[i] - lower[i]) * idx as f64 / (resolution - 1) as f64
                    }
                })
                .collect()
        })
        .collect();

    let result = if let ObjectiveKind::Quadratic {
        hess,
        linear,
        constant,
    } = obj.kind()
    {
        grid_max_quadratic(hess, linear, *constant, constraint, &axes)
    } else {
        grid_max_generic(obj, constraint, &axes)?
    };
    match result {
        Some((point, value)) => Ok((Point(point), value)),
        None => Err(Error::MalformedInput("no feasible grid point".into())),
    }
}

fn grid_max_generic(
    obj: &Objective,
    constraint: &Constraint,
    axes: &[Vec<f64>],
) -> Result<Option<(Vec<f64>, f64)>> {
    let n = axes.len();
    let res = axes[0].len();
    let mut idx = vec![0usize; n];
    let mut best: Option<(Vec<f64>, f64)> = None;
    loop {
        let x: Vec<f64> = (0..n).map(|i| axes[i][idx[i]]).collect();
        if contains(constraint, &x, 1e-9) && obj.domain().contains(&x, 1e-9) {
            let f = obj.eval(&x)?;
            if best.as_ref().map_or(true, |(_, bf)| f > *bf) {
                best = Some((x, f));
            }
        }
        // Lexicographic odometer.
        let mut d = n;
        loop {
            if d == 0 {
                return Ok(best);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < res {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn grid_max_quadratic(
    hess: &Mat,
    linear: &[f64],
    constant: f64,
    constraint: &Constraint,
    axes: &[Vec<f64>],
) -> Option<(Vec<f64>, f64)> {
    let n = axes.len();
    let res = axes[0].len();
    let last = n - 1;
    let (rows, rhs): (Option<&Mat>, &[f64]) = match constraint {
        Constraint::Box { .. } => (None, &[]),
        Constraint::Polytope { polytope } => (Some(polytope.matrix()), polytope.rhs()),
    };
    let quad_eval = |x: &[f64]| 0.5 * hess.quad_form(x) + dot(linear, x) + constant;

    let slab_best = |i0: usize| -> Option<(Vec<f64>, f64)> {
        let mut idx = vec![0usize; n];
        idx[0] = i0;
        let mut best: Option<(Vec<f64>, f64)> = None;
        loop {
            // Along the last axis the objective is the 1-D quadratic
            // f(u) = a2 u^2 + b1 u + const, so its grid maximum over the
            // feasible index range lies at a range endpoint or next to the
            // vertex. That replaces the inner scan with O(1) candidates.
            let mut x: Vec<f64> = (0..n).map(|i| axes[i][idx[i]]).collect();
            x[last] = axes[last][0];
            let step = if res > 1 {
                axes[last][1] - axes[last][0]
            } else {
                0.0
            };
            let a2 = 0.5 * hess.get(last, last);
            let b1: f64 = (0..n)
                .filter(|&j| j != last)
                .map(|j| hess.get(last, j) * x[j])
                .sum::<f64>()
                + linear[last];
            let base = quad_eval(&x);
            let u0 = x[last];
            let f_at = |u: f64| base + a2 * (u * u - u0 * u0) + b1 * (u - u0);

            // Feasible inner range [0, i_max] given the prefix.
            let mut i_max = res as isize - 1;
            let mut feasible_prefix = true;
            for r in 0..rhs.len() {
                let row = rows.unwrap().row(r);
                let prefix_dot: f64 = (0..n).filter(|&j| j != last).map(|j| row[j] * x[j]).sum();
                let coeff = row[last];
                let budget = rhs[r] + 1e-9 - prefix_dot;
                if coeff <= 0.0 {
                    if budget < 0.0 {
                        feasible_prefix = false;
                        break;
                    }
                    continue;
                }
                if step <= 0.0 {
                    if coeff * axes[last][0] > budget {
                        feasible_prefix = false;
                        break;
                    }
                    continue;
                }
                let mut cap = ((budget / coeff - axes[last][0]) / step).floor() as isize;
                cap = cap.clamp(-1, res as isize - 1);
                // Snap against the actual axis values (the final grid point
                // sits exactly on the upper bound).
                while cap >= 0 && coeff * axes[last][cap as usize] > budget {
                    cap -= 1;
                }
                while cap + 1 < res as isize && coeff * axes[last][(cap + 1) as usize] <= budget {
                    cap += 1;
                }
                i_max = i_max.min(cap);
                if i_max < 0 {
                    feasible_prefix = false;
                    break;
                }
            }

            if feasible_prefix {
                let mut candidates: Vec<usize> = vec![0, i_max as usize];
                if a2 < 0.0 && step > 0.0 {
                    let vertex = -b1 / (2.0 * a2);
                    let at = ((vertex - axes[last][0]) / step).floor() as isize;
                    for c in [at, at + 1] {
                        if c >= 0 && c <= i_max {
                            candidates.push(c as usize);
                        }
                    }
                }
                candidates.sort_unstable();
                candidates.dedup();
                for &inner in &candidates {
                    let u = axes[last][inner];
                    let f = f_at(u);
                    if best.as_ref().map_or(true, |(_, bf)| f > *bf) {
                        let mut point = x.clone();
                        point[last] = u;
                        best = Some((point, f));
                    }
                }
            }
            // Advance the prefix odometer over dims 1..last (dim 0 is the
            // slab, the last dim is the inner sweep).
            let mut d = last;
            let mut advanced = false;
            while d > 1 {
                d -= 1;
                idx[d] += 1;
                if idx[d] < res {
                    advanced = true;
                    break;
                }
                idx[d] = 0;
            }
            if !advanced {
                return best;
            }
        }
    };

    if n == 1 {
        return slab_best(0);
    }
    (0..res).into_par_iter().map(slab_best).reduce(
        || None,
        |acc, item| match (acc, item) {
            (None, b) => b,
            (a, None) => a,
            (Some((xa, fa)), Some((xb, fb))) => {
                // Strictly larger value wins; exact ties keep the
                // lexicographically smaller point (lower slab).
                if fb > fa || (fb == fa && xb < xa) {
                    Some((xb, fb))
                } else {
                    Some((xa, fa))
                }
            }
        },
    )
}

/// Exhaustive multilinear extension sum over all 2^n subsets (n <= 12).
pub fn mt_exhaustive(model: &SetFunctionModel, x: &[f64]) -> Result<f64> {
    let n = model.ground_set_size();
    if n > 12 {
        return Err(Error::TooLarge { n, limit: 12 });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        let mut p = 1.0;
        for (i, &xi) in x.iter().enumerate() {
            p *= if mask >> i & 1 == 1 { xi } else { 1.0 - xi };
        }
        total += model.value(mask) * p;
    }
    Ok(total)
}

/// Local-global audit. Reports whether the solve satisfies the stationarity
/// approximation bound at the given oracle optimum:
/// monotone case f(x) >= [f* - gap]/2 + (mu/4)||x - x*||^2,
/// two-phase case max(f(x), f(z)) >= [f* - gap_P - gap_Q]/4 (mu/8 terms when
/// the optimizer location is supplied).
pub fn local_global_audit(
    report: &SolveReport,
    f_star: f64,
    x_star: Option<&[f64]>,
    mu: f64,
    tol: f64,
) -> Result<CheckReport> {
    let (lhs, rhs, witness) = if let Some((p1, p2)) = &report.phases {
        let lhs = p1.f.max(p2.f);
        let mut rhs = 0.25 * (f_star - p1.gap - p2.gap);
        if mu > 0.0 {
            let xs = x_star.ok_or(Error::MissingGap)?;
            let dx: f64 =
                p1.x.coords()
                    .iter()
                    .zip(xs)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
            let z_star: Vec<f64> =
                p1.x.coords()
                    .iter()
                    .zip(xs)
                    .map(|(xi, si)| xi.max(*si) - xi)
                    .collect();
            let dz: f64 =
                p2.x.coords()
                    .iter()
                    .zip(&z_star)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
            rhs += mu / 8.0 * (dx + dz);
        }
        (lhs, rhs, vec![p1.x.0.clone(), p2.x.0.clone()])
    } else {
        let gap = report.solution_gap.ok_or(Error::MissingGap)?;
        let mut rhs = 0.5 * (f_star - gap);
        if mu > 0.0 {
            let xs = x_star.ok_or(Error::MissingGap)?;
            let dx: f64 = report
                .solution
                .coords()
                .iter()
                .zip(xs)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            rhs += mu / 4.0 * dx;
        }
        (report.solution_f, rhs, vec![report.solution.0.clone()])
    };
    let worst = rhs - lhs;
    Ok(CheckReport::from_worst(
        "local-global",
        1,
        tol,
        0,
        worst,
        witness,
    ))
}

/// Brute-force LP oracle: enumerates all candidate vertices (active-set
/// combinations of rows and bounds) and returns the feasible maximizer.
pub fn lp_enumerate(a: &Mat, b: &[f64], ubar: &[f64], g: &[f64]) -> Result<(Vec<f64>, f64)> {
    use nalgebra::{DMatrix, DVector};
    let n = ubar.len();
    let m = a.nrows();
    // Constraint list: m polytope rows, then x_i = 0, then x_i = ubar_i.
    let total = m + 2 * n;
    let feasible = |x: &[f64]| -> bool {
        x.iter()
            .zip(ubar)
            .all(|(xi, u)| *xi >= -1e-9 && *xi <= u + 1e-9)
            && (0..m).all(|r| dot(a.row(r), x) <= b[r] + 1e-9)
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        // Build and solve the n x n active system.
        let mut rows = DMatrix::zeros(n, n);
        let mut rhs = DVector::zeros(n);
        for (r, &c) in combo.iter().enumerate() {
            if c < m {
                for j in 0..n {
                    rows[(r, j)] = a.get(c, j);
                }
                rhs[r] = b[c];
            } else if c < m + n {
                rows[(r, c - m)] = 1.0;
                rhs[r] = 0.0;
            } else {
                rows[(r, c - m - n)] = 1.0;
                rhs[r] = ubar[c - m - n];
            }
        }
        if let Some(x) = rows.clone().lu().solve(&rhs) {
            let residual = (&rows * &x - &rhs).amax();
            if residual < 1e-7 {
                let xv: Vec<f64> = x.iter().copied().collect();
                if feasible(&xv) {
                    let val = dot(&xv, g);
                    if best.as_ref().map_or(true, |(_, bv)| val > *bv) {
                        best = Some((xv, val));
                    }
                }
            }
        }
        // Next combination of size n from `total`.
        let mut i = n;
        loop {
            if i == 0 {
                return best
                    .ok_or_else(|| Error::MalformedInput("no feasible vertex found".into()));
            }
            i -= 1;
            if combo[i] + (n - i) < total {
                combo[i] += 1;
                for j in i + 1..n {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}
