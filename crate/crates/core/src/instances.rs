//! Instance generators at desk scale, graph file parsing, and serializable
//! run reports.

use crate::constraints::{Constraint, DownClosedPolytope};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::meanfield::SetFunctionModel;
use crate::objectives::{Activation, BoxDomain, Objective};
use crate::rng::SplitMix64;
use crate::solvers::{Certificate, SolveReport, SolverConfig};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A solvable problem instance: objective, constraint, label, seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub objective: Objective,
    pub constraint: Constraint,
    pub label: String,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.objective.dim() != self.constraint.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.objective.dim(),
                got: self.constraint.dim(),
            });
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let spec: InstanceSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Random monotone DR-submodular quadratic program: H has i.i.d. U(-100, 0)
/// entries symmetrized as (H + H')/2, h = -H' ubar, A has U(0,1) entries,
/// b = 1, ubar = 1.
pub fn gen_sqp(n: usize, m: usize, seed: u64) -> Result<InstanceSpec> {
    let mut rng = SplitMix64::stream(seed, 0x5009);
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, rng.uniform(-100.0, 0.0));
        }
    }
    // Symmetrize; entries stay in [-100, 0].
    let mut hs = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            hs.set(i, j, 0.5 * (h.get(i, j) + h.get(j, i)));
        }
    }
    let ubar = vec![1.0; n];
    let linear: Vec<f64> = (0..n)
        .map(|i| -(0..n).map(|j| hs.get(j, i) * ubar[j]).sum::<f64>())
        .collect();
    let mut a = Mat::zeros(m, n);
    for r in 0..m {
        for j in 0..n {
            a.set(r, j, rng.next_f64());
        }
    }
    let objective =
        Objective::quadratic(hs, linear, 0.0, BoxDomain::new(vec![0.0; n], ubar.clone())?)?
            .require_dr()?;
    let constraint = Constraint::polytope(DownClosedPolytope::new(a, vec![1.0; m], ubar)?);
    Ok(InstanceSpec {
        objective,
        constraint,
        label: format!("sqp-n{n}-m{m}-s{seed}"),
        seed,
    })
}

/// Random softmax instance: eigenvalues U(0, 10), a random orthogonal basis
/// from the QR of a Gaussian matrix with sign-fixed R diagonal, and one
/// budget row 1'x <= budget_frac * n with unit coordinate bounds.
pub fn gen_softmax(n: usize, budget_frac: f64, seed: u64) -> Result<InstanceSpec> {
    if !(budget_frac > 0.0 && budget_frac <= 1.0) {
        return Err(Error::StructuralViolation(
            "budget fraction must be in (0,1]".into(),
        ));
    }
    let mut rng = SplitMix64::stream(seed, 0x50F7);
    let eigenvalues: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 10.0)).collect();
    let gauss = DMatrix::from_fn(n, n, |_, _| rng.normal());
    let qr = gauss.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    let mut kernel: DMatrix<f64> = DMatrix::zeros(n, n);
    for k in 0..n {
        let col = q.column(k);
        for i in 0..n {
            for j in 0..n {
                kernel[(i, j)] += eigenvalues[k] * col[i] * col[j];
            }
        }
    }
    // Exact symmetry despite accumulated rounding.
    let kernel = Mat::from_dmatrix(&DMatrix::from_fn(n, n, |i, j| {
        0.5 * (kernel[(i, j)] + kernel[(j, i)])
    }));
    let objective = Objective::softmax(kernel, BoxDomain::unit(n))?;
    let a = Mat::new(1, n, vec![1.0; n]);
    let constraint = Constraint::polytope(DownClosedPolytope::new(
        a,
        vec![budget_frac * n as f64],
        vec![1.0; n],
    )?);
    Ok(InstanceSpec {
        objective,
        constraint,
        label: format!("softmax-n{n}-b{budget_frac}-s{seed}"),
        seed,
    })
}

/// Revenue instance from a weighted graph file with a cardinality-style
/// budget 1'x <= budget_frac * n * scale and ubar = scale.
pub fn gen_revenue(
    graph_path: &Path,
    q: f64,
    budget_frac: f64,
    scale: f64,
) -> Result<InstanceSpec> {
    let weights = load_graph(graph_path)?;
    let n = weights.nrows();
    let domain = BoxDomain::new(vec![0.0; n], vec![scale; n])?;
    let objective = Objective::revenue_ie(weights, q, domain)?;
    let a = Mat::new(1, n, vec![1.0; n]);
    let constraint = Constraint::polytope(DownClosedPolytope::new(
        a,
        vec![budget_frac * n as f64 * scale],
        vec![scale; n],
    )?);
    Ok(InstanceSpec {
        objective,
        constraint,
        label: format!("revenue-q{q}-b{budget_frac}"),
        seed: 0,
    })
}

/// The 4-node directed-cut model with arcs (0,1), (1,2), (2,3) of weight c
/// and (2,1) of weight b*c, plus the stuck point for coordinate ascent.
pub struct PathologyInstance {
    pub model: SetFunctionModel,
    pub stuck_point: Vec<f64>,
}

pub fn gen_pathology(c: f64, b: f64) -> Result<PathologyInstance> {
    if c <= 0.0 || b <= 0.0 {
        return Err(Error::StructuralViolation(
            "pathology weights must be positive".into(),
        ));
    }
    let mut w = Mat::zeros(4, 4);
    w.set(0, 1, c);
    w.set(1, 2, c);
    w.set(2, 3, c);
    w.set(2, 1, b * c);
    let model = SetFunctionModel::Cut {
        weights: w,
        directed: true,
    };
    model.validate()?;
    Ok(PathologyInstance {
        model,
        stuck_point: vec![0.5, 1.0, 0.0, 0.5],
    })
}

/// Random bipartite influence instance: edges appear with probability 0.3,
/// per-user activation probabilities follow sigma(-degree), and the inner
/// facility-location weights are U(0,1) over three latent dimensions.
pub fn gen_bipartite_influence(
    n_users: usize,
    n_actions: usize,
    seed: u64,
) -> Result<InstanceSpec> {
    let mut rng = SplitMix64::stream(seed, 0x1F7);
    let mut edges = vec![vec![false; n_users]; n_actions];
    for row in edges.iter_mut() {
        for cell in row.iter_mut() {
            *cell = rng.next_f64() < 0.3;
        }
    }
    let mut probs = Mat::zeros(n_actions, n_users);
    for t in 0..n_users {
        let degree = (0..n_actions).filter(|&s| edges[s][t]).count();
        let p = crate::objectives::sigmoid(-(degree as f64));
        for s in 0..n_actions {
            if edges[s][t] {
                probs.set(s, t, p);
            }
        }
    }
    let latent = 3;
    let mut facility = Mat::zeros(n_users, latent);
    for i in 0..n_users {
        for d in 0..latent {
            facility.set(i, d, rng.next_f64());
        }
    }
    let domain = BoxDomain::new(vec![0.0; n_actions], vec![1.0; n_actions])?;
    let objective = Objective::influence(Activation::Bipartite { probs }, facility, domain)?;
    let constraint = Constraint::Box {
        lower: vec![0.0; n_actions],
        upper: vec![1.0; n_actions],
    };
    Ok(InstanceSpec {
        objective,
        constraint,
        label: format!("influence-u{n_users}-a{n_actions}-s{seed}"),
        seed,
    })
}

/// Parses whitespace-separated `i j w` lines (0-indexed). Duplicate edges are
/// summed; negative weights are rejected.
pub fn load_graph(path: &Path) -> Result<Mat> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::GraphParseError(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<Mat> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut n = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::GraphParseError(format!(
                "line {}: expected `i j w`, got {line:?}",
                lineno + 1
            )));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| Error::GraphParseError(format!("line {}: bad index", lineno + 1)))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| Error::GraphParseError(format!("line {}: bad index", lineno + 1)))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| Error::GraphParseError(format!("line {}: bad weight", lineno + 1)))?;
        if w < 0.0 {
            return Err(Error::NegativeWeight);
        }
        n = n.max(i + 1).max(j + 1);
        edges.push((i, j, w));
    }
    let mut weights = Mat::zeros(n, n);
    for (i, j, w) in edges {
        weights.set(i, j, weights.get(i, j) + w);
    }
    Ok(weights)
}

/// Slim trajectory row for run reports and CSV output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub k: usize,
    pub t: f64,
    pub f: f64,
    pub gap: Option<f64>,
    pub gamma: f64,
}

/// Serializable summary of one solve, suitable for JSON round-trips and
/// trajectory plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub instance_label: String,
    pub config: SolverConfig,
    pub trajectory: Vec<TrajectoryRow>,
    pub solution: Vec<f64>,
    pub solution_f: f64,
    pub best_f: f64,
    pub f_star: Option<f64>,
    pub certificate: Option<Certificate>,
    pub certificate_expression: Option<String>,
    /// Certificate right-hand side evaluated at f_star, when both are known.
    pub certificate_rhs: Option<f64>,
    pub wallclock_seconds: f64,
}

impl RunReport {
    pub fn new(label: &str, cfg: &SolverConfig, solve: &SolveReport, f_star: Option<f64>) -> Self {
        let rhs = match (&solve.certificate, f_star) {
            (Some(c), Some(fs)) => c.rhs(fs),
            _ => None,
        };
        RunReport {
            algorithm: solve.algorithm.clone(),
            instance_label: label.into(),
            config: cfg.clone(),
            trajectory: solve
                .trajectory
                .iter()
                .map(|r| TrajectoryRow {
                    k: r.k,
                    t: r.t,
                    f: r.f,
                    gap: r.gap,
                    gamma: r.gamma,
                })
                .collect(),
            solution: solve.solution.0.clone(),
            solution_f: solve.solution_f,
            best_f: solve.best_f,
            f_star,
            certificate: solve.certificate.clone(),
            certificate_expression: solve.certificate.as_ref().map(Certificate::expression),
            certificate_rhs: rhs,
            wallclock_seconds: solve.wallclock_seconds,
        }
    }

    /// Full-precision trajectory CSV with header `k,t,f,gap,gamma`.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("k,t,f,gap,gamma\n");
        for row in &self.trajectory {
            let gap = row.gap.map_or("nan".to_string(), |g| format!("{:.16e}", g));
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{},{:.16e}\n",
                row.k, row.t, row.f, gap, row.gamma
            ));
        }
        out
    }
}
