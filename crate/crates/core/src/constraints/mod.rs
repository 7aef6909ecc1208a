//! Feasible regions: boxes and down-closed polytopes, with linear
//! maximization oracles, Euclidean projection and membership tests.

mod simplex;

pub use simplex::{simplex_max, LpSolution, LpStatus};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Mat};
use crate::objectives::BoxDomain;
use serde::{Deserialize, Serialize};

/// {x : Ax <= b, 0 <= x <= ubar} with A, b, ubar non-negative, so the origin
/// is feasible and the set is down-closed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PolytopeRepr", into = "PolytopeRepr")]
pub struct DownClosedPolytope {
    a: Mat,
    b: Vec<f64>,
    ubar: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    #[serde(rename = "A")]
    a: Mat,
    b: Vec<f64>,
    ubar: Vec<f64>,
}

impl TryFrom<PolytopeRepr> for DownClosedPolytope {
    type Error = Error;
    fn try_from(r: PolytopeRepr) -> Result<Self> {
        DownClosedPolytope::new(r.a, r.b, r.ubar)
    }
}

impl From<DownClosedPolytope> for PolytopeRepr {
    fn from(p: DownClosedPolytope) -> Self {
        PolytopeRepr {
            a: p.a,
            b: p.b,
            ubar: p.ubar,
        }
    }
}

impl DownClosedPolytope {
    pub fn new(a: Mat, b: Vec<f64>, ubar: Vec<f64>) -> Result<Self> {
        let n = ubar.len();
        let m = a.nrows();
        if m > 0 && a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.ncols(),
            });
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: b.len(),
            });
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
            return Err(Error::MalformedInput("ubar must be non-negative".into()));
        }
        Ok(Self { a, b, ubar })
    }

    pub fn matrix(&self) -> &Mat {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn ubar(&self) -> &[f64] {
        &self.ubar
    }

    pub fn dim(&self) -> usize {
        self.ubar.len()
    }
}

/// Tagged feasible region.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Constraint {
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Polytope {
        #[serde(flatten)]
        polytope: DownClosedPolytope,
    },
}

impl Constraint {
    pub fn from_box(domain: &BoxDomain) -> Self {
        Constraint::Box {
            lower: domain.lower.clone(),
            upper: domain.upper.clone(),
        }
    }

    pub fn polytope(p: DownClosedPolytope) -> Self {
        Constraint::Polytope { polytope: p }
    }

    pub fn dim(&self) -> usize {
        match self {
            Constraint::Box { lower, .. } => lower.len(),
            Constraint::Polytope { polytope } => polytope.dim(),
        }
    }

    /// Coordinate lower bounds (zero for polytopes).
    pub fn lower(&self) -> Vec<f64> {
        match self {
            Constraint::Box { lower, .. } => lower.clone(),
            Constraint::Polytope { polytope } => vec![0.0; polytope.dim()],
        }
    }

    /// Coordinate upper bounds.
    pub fn upper(&self) -> Vec<f64> {
        match self {
            Constraint::Box { upper, .. } => upper.clone(),
            Constraint::Polytope { polytope } => polytope.ubar().to_vec(),
        }
    }

    /// Down-closed with lower bound 0: required by the greedy Frank-Wolfe
    /// solvers.
    pub fn is_down_closed(&self) -> bool {
        match self {
            Constraint::Box { lower, .. } => lower.iter().all(|&l| l == 0.0),
            Constraint::Polytope { .. } => true,
        }
    }
}

/// argmax <v, g> over the constraint (exact LMO).
pub fn lmo(constraint: &Constraint, g: &[f64]) -> Result<Vec<f64>> {
    if g.len() != constraint.dim() {
        return Err(Error::DimensionMismatch {
            expected: constraint.dim(),
            got: g.len(),
        });
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::MalformedInput("LMO direction must be finite".into()));
    }
    match constraint {
        Constraint::Box { lower, upper } => Ok(g
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(gi, (l, u))| if *gi > 0.0 { *u } else { *l })
            .collect()),
        Constraint::Polytope { polytope } => {
            Ok(simplex_max(&polytope.a, &polytope.b, &polytope.ubar, g)?.vertex)
        }
    }
}

/// argmax <v, g> over the constraint intersected with {v <= cap}.
pub fn lmo_shrunken(constraint: &Constraint, g: &[f64], cap: &[f64]) -> Result<Vec<f64>> {
    if cap.len() != constraint.dim() {
        return Err(Error::DimensionMismatch {
            expected: constraint.dim(),
            got: cap.len(),
        });
    }
    if cap.iter().any(|&c| c < -1e-12) {
        return Err(Error::NegativeCap);
    }
    match constraint {
        Constraint::Box { lower, upper } => {
            if g.len() != constraint.dim() {
                return Err(Error::DimensionMismatch {
                    expected: constraint.dim(),
                    got: g.len(),
                });
            }
            Ok(g.iter()
                .zip(lower.iter().zip(upper.iter().zip(cap)))
                .map(|(gi, (l, (u, c)))| if *gi > 0.0 { u.min(*c).max(*l) } else { *l })
                .collect())
        }
        Constraint::Polytope { polytope } => {
            let tightened: Vec<f64> = polytope
                .ubar
                .iter()
                .zip(cap)
                .map(|(u, c)| u.min(*c).max(0.0))
                .collect();
            Ok(simplex_max(&polytope.a, &polytope.b, &tightened, g)?.vertex)
        }
    }
}

/// Euclidean projection. Boxes clip componentwise; polytopes run Frank-Wolfe
/// on 1/2 ||x - y||^2 with exact line search, stopping at a 1e-8 gap or 500
/// iterations.
pub fn project(constraint: &Constraint, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != constraint.dim() {
        return Err(Error::DimensionMismatch {
            expected: constraint.dim(),
            got: y.len(),
        });
    }
    match constraint {
        Constraint::Box { lower, upper } => Ok(y
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(yi, (l, u))| yi.max(*l).min(*u))
            .collect()),
        Constraint::Polytope { .. } => {
            if contains(constraint, y, 1e-12) {
                return Ok(y.to_vec());
            }
            let n = y.len();
            let mut x = vec![0.0; n];
            for _ in 0..500 {
                // minimize 1/2||x-y||^2: gradient x - y, so the FW vertex
                // maximizes <v, y - x>.
                let dir: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi - xi).collect();
                let v = lmo(constraint, &dir)?;
                let d: Vec<f64> = v.iter().zip(&x).map(|(vi, xi)| vi - xi).collect();
                let gap = dot(&d, &dir);
                if gap <= 1e-8 {
                    break;
                }
                let dd = dot(&d, &d);
                if dd <= 0.0 {
                    break;
                }
                let gamma = (gap / dd).clamp(0.0, 1.0);
                for (xi, di) in x.iter_mut().zip(&d) {
                    *xi += gamma * di;
                }
            }
            Ok(x)
        }
    }
}

/// Membership within an additive tolerance on every defining inequality.
pub fn contains(constraint: &Constraint, x: &[f64], tol: f64) -> bool {
    if x.len() != constraint.dim() {
        return false;
    }
    match constraint {
        Constraint::Box { lower, upper } => x
            .iter()
            .zip(lower.iter().zip(upper))
            .all(|(xi, (l, u))| *xi >= l - tol && *xi <= u + tol),
        Constraint::Polytope { polytope } => {
            let bounds_ok = x
                .iter()
                .zip(polytope.ubar())
                .all(|(xi, u)| *xi >= -tol && *xi <= u + tol);
            let rows_ok =
                (0..polytope.a.nrows()).all(|i| dot(polytope.a.row(i), x) <= polytope.b[i] + tol);
            bounds_ok && rows_ok
        }
    }
}

/// Exact diameter for boxes; the ||ubar|| upper bound for polytopes.
pub fn diameter(constraint: &Constraint) -> f64 {
    match constraint {
        Constraint::Box { lower, upper } => norm2(
            &upper
                .iter()
                .zip(lower)
                .map(|(u, l)| u - l)
                .collect::<Vec<_>>(),
        ),
        Constraint::Polytope { polytope } => norm2(polytope.ubar()),
    }
}
