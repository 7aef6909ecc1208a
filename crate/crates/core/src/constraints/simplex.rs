//! Bounded-variable primal simplex for positive LPs
//!   max g'x  s.t.  Ax <= b, 0 <= x <= u
//! with A, b, u all non-negative (so the origin is always feasible and no
//! phase-1 is needed). Bland's anti-cycling rule throughout; every tie is
//! broken toward the lowest variable index so runs are fully deterministic.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Pivot/feasibility tolerance.
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
}

/// Optimal basic feasible solution of the bounded LP.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpSolution {
    pub vertex: Vec<f64>,
    pub value: f64,
    pub status: LpStatus,
}

struct Problem<'a> {
    a: &'a Mat,
    b: &'a [f64],
    upper: Vec<f64>, // n structural bounds, then m slack bounds (infinite)
    obj: Vec<f64>,   // g extended with zeros for slacks
    n: usize,
    m: usize,
}

impl Problem<'_> {
    /// Column j of [A | I].
    fn column(&self, j: usize) -> DVector<f64> {
        let mut col = DVector::zeros(self.m);
        if j < self.n {
            for i in 0..self.m {
                col[i] = self.a.get(i, j);
            }
        } else {
            col[j - self.n] = 1.0;
        }
        col
    }
}

/// Solves max <x, g> over {Ax <= b, 0 <= x <= ubar}.
pub fn simplex_max(a: &Mat, b: &[f64], ubar: &[f64], g: &[f64]) -> Result<LpSolution> {
    let m = a.nrows();
    let n = ubar.len();
    if a.ncols() != n && m > 0 {
        return Err(Error::MalformedInput(format!(
            "A has {} columns but there are {n} variables",
            a.ncols()
        )));
    }
    if b.len() != m {
        return Err(Error::MalformedInput(
            "b length must match the row count of A".into(),
        ));
    }
    if g.len() != n {
        return Err(Error::MalformedInput(
            "objective length must match the variable count".into(),
        ));
    }
    for i in 0..m {
        if b[i] < 0.0 {
            return Err(Error::MalformedInput("b must be non-negative".into()));
        }
        for j in 0..n {
            if a.get(i, j) < 0.0 {
                return Err(Error::MalformedInput("A must be non-negative".into()));
            }
        }
    }
    if ubar.iter().any(|&u| u < 0.0) {
        return Err(Error::MalformedInput(
            "upper bounds must be non-negative".into(),
        ));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::MalformedInput("objective must be finite".into()));
    }

    let mut upper = ubar.to_vec();
    upper.extend(std::iter::repeat(f64::INFINITY).take(m));
    let mut obj = g.to_vec();
    obj.extend(std::iter::repeat(0.0).take(m));
    let problem = Problem {
        a,
        b,
        upper,
        obj,
        n,
        m,
    };

    // Initial basis: the slack variables; all structurals non-basic at lower.
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut in_basis = vec![false; n + m];
    for &j in &basis {
        in_basis[j] = true;
    }
    let mut at_upper = vec![false; n + m];

    let max_pivots = 200 * (n + m + 1);
    for _ in 0..=max_pivots {
        // Current basic values: B x_B = b - sum of non-basic columns at upper.
        let binv = basis_inverse(&problem, &basis)?;
        let mut rhs = DVector::from_column_slice(problem.b);
        for j in 0..n + m {
            if !in_basis[j] && at_upper[j] {
                rhs -= problem.column(j) * problem.upper[j];
            }
        }
        let xb = &binv * rhs;

        // Simplex multipliers and reduced costs.
        let cb = DVector::from_iterator(m, basis.iter().map(|&j| problem.obj[j]));
        let y = binv.transpose() * cb;

        let mut entering: Option<usize> = None;
        for j in 0..n + m {
            if in_basis[j] {
                continue;
            }
            let reduced = problem.obj[j] - y.dot(&problem.column(j));
            let improves = if at_upper[j] {
                reduced < -TOL
            } else {
                reduced > TOL
            };
            if improves {
                entering = Some(j); // lowest index wins: scan order is Bland's rule
                break;
            }
        }
        let Some(e) = entering else {
            return Ok(extract(&problem, &basis, &xb, &at_upper, &in_basis));
        };

        // Direction of change of the entering variable.
        let sigma = if at_upper[e] { -1.0 } else { 1.0 };
        let w = &binv * problem.column(e);

        // Ratio test: entering's own bound versus blocking basic variables.
        let mut t_best = if problem.upper[e].is_finite() {
            problem.upper[e]
        } else {
            f64::INFINITY
        };
        let mut blocker: Option<(usize, bool)> = None; // (row, leaves_at_upper)
        for r in 0..m {
            let delta = sigma * w[r]; // basic r changes by -delta * t
            if delta > TOL {
                let t = (xb[r] / delta).max(0.0);
                if t < t_best - TOL
                    || (t < t_best + TOL && blocker.map_or(false, |(br, _)| basis[r] < basis[br]))
                {
                    t_best = t;
                    blocker = Some((r, false));
                }
            } else if delta < -TOL {
                let ub = problem.upper[basis[r]];
                if ub.is_finite() {
                    let t = ((ub - xb[r]) / -delta).max(0.0);
                    if t < t_best - TOL
                        || (t < t_best + TOL
                            && blocker.map_or(false, |(br, _)| basis[r] < basis[br]))
                    {
                        t_best = t;
                        blocker = Some((r, true));
                    }
                }
            }
        }
        if !t_best.is_finite() {
            return Err(Error::MalformedInput(
                "LP is unbounded; inputs are malformed".into(),
            ));
        }

        match blocker {
            None => {
                // Bound flip: the entering variable runs to its other bound.
                at_upper[e] = !at_upper[e];
            }
            Some((row, leaves_at_upper)) => {
                let leaving = basis[row];
                basis[row] = e;
                in_basis[e] = true;
                in_basis[leaving] = false;
                at_upper[leaving] = leaves_at_upper;
                at_upper[e] = false;
            }
        }
    }
    Err(Error::MalformedInput("simplex failed to terminate".into()))
}

fn basis_inverse(problem: &Problem<'_>, basis: &[usize]) -> Result<DMatrix<f64>> {
    let m = problem.m;
    if m == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let mut bmat = DMatrix::zeros(m, m);
    for (k, &j) in basis.iter().enumerate() {
        bmat.set_column(k, &problem.column(j));
    }
    bmat.lu()
        .try_inverse()
        .ok_or_else(|| Error::MalformedInput("singular simplex basis".into()))
}

fn extract(
    problem: &Problem<'_>,
    basis: &[usize],
    xb: &DVector<f64>,
    at_upper: &[bool],
    in_basis: &[bool],
) -> LpSolution {
    let mut x = vec![0.0; problem.n + problem.m];
    for j in 0..problem.n + problem.m {
        if !in_basis[j] && at_upper[j] {
            x[j] = problem.upper[j];
        }
    }
    for (r, &j) in basis.iter().enumerate() {
        x[j] = xb[r].max(0.0);
        if problem.upper[j].is_finite() {
            x[j] = x[j].min(problem.upper[j]);
        }
    }
    let vertex: Vec<f64> = x[..problem.n].to_vec();
    let value = vertex
        .iter()
        .zip(&problem.obj[..problem.n])
        .map(|(a, b)| a * b)
        .sum();
    LpSolution {
        vertex,
        value,
        status: LpStatus::Optimal,
    }
}
