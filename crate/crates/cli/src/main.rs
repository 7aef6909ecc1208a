//! `drsub`: generate instances, run solvers, check structural properties,
//! run mean-field inference, and evaluate grid oracles.

use clap::{Args, Parser, Subcommand, ValueEnum};
use drsub_core::instances::{
    gen_bipartite_influence, gen_pathology, gen_revenue, gen_softmax, gen_sqp, InstanceSpec,
    RunReport,
};
use drsub_core::meanfield::{build_elbo, build_pa_elbo, log_partition_exact, PaModel};
use drsub_core::solvers::*;
use drsub_core::verify::{
    check_alpha_dr, check_dr, check_monotone, check_submodular_0th, check_weak_dr, grid_max,
};
use drsub_core::{BoxDomain, Constraint, Objective, SetFunctionModel};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "drsub",
    about = "Continuous submodular and DR-submodular maximization toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance or model file.
    Gen(GenArgs),
    /// Run a solver on an instance file and write a run report.
    Solve(SolveArgs),
    /// Check a structural property of an objective by seeded sampling.
    Check(CheckArgs),
    /// Mean-field inference on a set-function model (ELBO or PA-ELBO).
    Meanfield(MeanfieldArgs),
    /// Exhaustive grid oracle for the optimum of an instance.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sqp,
    Softmax,
    Revenue,
    Pathology,
    Influence,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Dimension / ground-set size (sqp, softmax).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Number of polytope rows (sqp).
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Budget fraction of n (softmax, revenue).
    #[arg(long, default_value_t = 0.5)]
    budget_frac: f64,
    /// Graph file `i j w` (revenue).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Advocacy decay parameter in (0,1) (revenue).
    #[arg(long, default_value_t = 0.75)]
    q: f64,
    /// Coordinate upper bound scale (revenue).
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Chain arc weight (pathology).
    #[arg(long, default_value_t = 50.0)]
    c: f64,
    /// Back-arc multiplier (pathology).
    #[arg(long, default_value_t = 10.0)]
    b: f64,
    /// User count (influence).
    #[arg(long, default_value_t = 10)]
    users: usize,
    /// Action count (influence).
    #[arg(long, default_value_t = 6)]
    actions: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    #[value(name = "submodular-fw")]
    SubmodularFw,
    #[value(name = "nonconvex-fw")]
    NonconvexFw,
    Pga,
    #[value(name = "shrunken-fw")]
    ShrunkenFw,
    #[value(name = "two-phase")]
    TwoPhase,
    #[value(name = "sub-dg")]
    SubDg,
    #[value(name = "dr-dg")]
    DrDg,
    #[value(name = "coord-ascent")]
    CoordAscent,
    #[value(name = "dg-meanfield-1/3")]
    DgMeanfieldThird,
    #[value(name = "dg-meanfield-1/2")]
    DgMeanfieldHalf,
}

#[derive(Clone, Copy, ValueEnum)]
enum StepName {
    Constant,
    Oblivious,
    Lipschitz,
    Adaptive,
    #[value(name = "line-search")]
    LineSearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderName {
    Natural,
    Random,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    instance: Option<PathBuf>,
    /// Batch mode: solve each instance concurrently, writing
    /// `<stem>-report.json` (and `<stem>-traj.csv` with --csv) per instance.
    #[arg(long, num_args = 1.., value_name = "FILES")]
    batch: Option<Vec<PathBuf>>,
    /// Output directory for batch reports (defaults to each instance's own
    /// directory).
    #[arg(long)]
    report_dir: Option<PathBuf>,
    /// Iterations K (FW family) or epochs (coordinate family).
    #[arg(long)]
    iters: Option<usize>,
    /// Second-phase iterations (two-phase).
    #[arg(long)]
    iters2: Option<usize>,
    #[arg(long, value_enum)]
    step: Option<StepName>,
    /// Constant step size, or the adaptive rule's constant.
    #[arg(long)]
    gamma: Option<f64>,
    /// Lipschitz constant override.
    #[arg(long = "L")]
    lipschitz: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    order: Option<OrderName>,
    /// Start point: "zeros", "ones", "random", or comma-separated values.
    #[arg(long)]
    init: Option<String>,
    /// Oracle optimum used to evaluate the certificate, when known.
    #[arg(long)]
    fstar: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Trajectory CSV (k,t,f,gap,gamma).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyName {
    #[value(name = "weak-dr")]
    WeakDr,
    Dr,
    Submodular,
    Monotone,
    #[value(name = "alpha-dr")]
    AlphaDr,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    property: PropertyName,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Instance file (or bare objective file).
    #[arg(long)]
    instance: PathBuf,
    /// Sign vector for alpha-dr, e.g. "1,-1,1".
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeanfieldAlg {
    #[value(name = "dg-1/2")]
    Half,
    #[value(name = "dg-1/3")]
    Third,
    Coord,
}

#[derive(Args)]
struct MeanfieldArgs {
    #[arg(long, value_enum)]
    alg: MeanfieldAlg,
    #[arg(long)]
    model: PathBuf,
    /// Second model: switches the objective to the posterior-agreement form.
    #[arg(long)]
    model2: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    /// Coordinate-ascent epochs after (or instead of) the double greedy.
    #[arg(long, default_value_t = 2)]
    epochs: usize,
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Grid resolution per axis.
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[arg(long)]
    instance: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Check(args) => check(args),
        Command::Meanfield(args) => meanfield(args),
        Command::Oracle(args) => oracle(args),
    }
}

/// Missing seeds fall back to DRSUB_SEED, then 0.
fn effective_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("DRSUB_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| e.to_string())?,
        None => println!("{text}"),
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), String> {
    let seed = effective_seed(args.seed);
    match args.family {
        Family::Sqp => {
            let spec = gen_sqp(args.n, args.m, seed).map_err(|e| e.to_string())?;
            spec.save(&args.output).map_err(|e| e.to_string())?;
        }
        Family::Softmax => {
            let spec = gen_softmax(args.n, args.budget_frac, seed).map_err(|e| e.to_string())?;
            spec.save(&args.output).map_err(|e| e.to_string())?;
        }
        Family::Revenue => {
            let graph = args
                .graph
                .ok_or_else(|| "revenue generation needs --graph".to_string())?;
            let spec = gen_revenue(&graph, args.q, args.budget_frac, args.scale)
                .map_err(|e| e.to_string())?;
            spec.save(&args.output).map_err(|e| e.to_string())?;
        }
        Family::Pathology => {
            let p = gen_pathology(args.c, args.b).map_err(|e| e.to_string())?;
            write_json(&p.model, Some(&args.output))?;
            println!(
                "stuck point for coordinate ascent: {}",
                p.stuck_point
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
        Family::Influence => {
            let spec = gen_bipartite_influence(args.users, args.actions, seed)
                .map_err(|e| e.to_string())?;
            spec.save(&args.output).map_err(|e| e.to_string())?;
        }
    }
    eprintln!("wrote {}", args.output.display());
    Ok(())
}

fn parse_init(text: &str) -> Result<InitKind, String> {
    match text {
        "zeros" => Ok(InitKind::Zeros),
        "ones" => Ok(InitKind::Ones),
        "random" => Ok(InitKind::UniformRandom),
        list => {
            let point: Result<Vec<f64>, _> =
                list.split(',').map(|v| v.trim().parse::<f64>()).collect();
            Ok(InitKind::Given {
                point: point.map_err(|_| format!("bad init point {list:?}"))?,
            })
        }
    }
}

fn build_config(
    iters: Option<usize>,
    iters2: Option<usize>,
    step: Option<StepName>,
    gamma: Option<f64>,
    lipschitz: Option<f64>,
    epsilon: Option<f64>,
    seed: Option<u64>,
    order: Option<OrderName>,
    init: Option<&str>,
) -> Result<SolverConfig, String> {
    let mut cfg = SolverConfig {
        seed: effective_seed(seed),
        ..Default::default()
    };
    if let Some(k) = iters {
        cfg.iterations = k;
    }
    cfg.iterations2 = iters2;
    if let Some(e) = epsilon {
        cfg.epsilon = e;
    }
    cfg.lipschitz_override = lipschitz;
    cfg.step_rule = match step {
        None => StepRule::Auto,
        Some(StepName::Constant) => StepRule::Constant {
            gamma: gamma.ok_or_else(|| "--step constant needs --gamma".to_string())?,
        },
        Some(StepName::Oblivious) => StepRule::Oblivious,
        Some(StepName::Lipschitz) => StepRule::Lipschitz,
        Some(StepName::Adaptive) => StepRule::Adaptive {
            c: gamma.unwrap_or(1.0),
        },
        Some(StepName::LineSearch) => StepRule::LineSearch,
    };
    if let Some(OrderName::Random) = order {
        cfg.coordinate_order = CoordinateOrder::Random;
    }
    if let Some(text) = init {
        cfg.init = parse_init(text)?;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn require_box(constraint: &Constraint) -> Result<BoxDomain, String> {
    match constraint {
        Constraint::Box { lower, upper } => {
            BoxDomain::new(lower.clone(), upper.clone()).map_err(|e| e.to_string())
        }
        Constraint::Polytope { .. } => Err("this solver runs on box constraints only".to_string()),
    }
}

fn dispatch(
    alg: Algorithm,
    objective: &Objective,
    constraint: &Constraint,
    cfg: &SolverConfig,
) -> Result<SolveReport, String> {
    let report = match alg {
        Algorithm::SubmodularFw => submodular_fw(objective, constraint, cfg),
        Algorithm::NonconvexFw => nonconvex_fw(objective, constraint, cfg),
        Algorithm::Pga => pga(objective, constraint, cfg),
        Algorithm::ShrunkenFw => shrunken_fw(objective, constraint, cfg),
        Algorithm::TwoPhase => two_phase(objective, constraint, cfg),
        Algorithm::SubDg => submodular_double_greedy(objective, &require_box(constraint)?, cfg),
        Algorithm::DrDg => dr_double_greedy(objective, &require_box(constraint)?, cfg),
        Algorithm::CoordAscent => coordinate_ascent(objective, &require_box(constraint)?, cfg),
        Algorithm::DgMeanfieldThird => dg_meanfield(
            objective,
            &require_box(constraint)?,
            cfg,
            DoubleGreedyVariant::Third,
        ),
        Algorithm::DgMeanfieldHalf => dg_meanfield(
            objective,
            &require_box(constraint)?,
            cfg,
            DoubleGreedyVariant::Half,
        ),
    };
    report.map_err(|e| e.to_string())
}

fn solve(args: SolveArgs) -> Result<(), String> {
    let cfg = build_config(
        args.iters,
        args.iters2,
        args.step,
        args.gamma,
        args.lipschitz,
        args.epsilon,
        args.seed,
        args.order,
        args.init.as_deref(),
    )?;

    if let Some(files) = &args.batch {
        return solve_batch(
            files,
            args.alg,
            &cfg,
            args.report_dir.as_deref(),
            args.fstar,
        );
    }

    let instance = args.instance.as_deref().expect("clap enforces --instance");
    let spec = InstanceSpec::load(instance).map_err(|e| e.to_string())?;
    let report = dispatch(args.alg, &spec.objective, &spec.constraint, &cfg)?;
    let run = RunReport::new(&spec.label, &cfg, &report, args.fstar);
    if let Some(csv_path) = &args.csv {
        std::fs::write(csv_path, run.trajectory_csv()).map_err(|e| e.to_string())?;
    }
    write_json(&run, args.output.as_deref())?;
    eprintln!(
        "{}: best f = {:.12}, solution f = {:.12}",
        run.algorithm, run.best_f, run.solution_f
    );
    Ok(())
}

/// Independent instances run concurrently; each writes its own report file.
fn solve_batch(
    files: &[PathBuf],
    alg: Algorithm,
    cfg: &SolverConfig,
    report_dir: Option<&Path>,
    fstar: Option<f64>,
) -> Result<(), String> {
    let results: Vec<Result<String, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| {
                scope.spawn(move || -> Result<String, String> {
                    let spec = InstanceSpec::load(path).map_err(|e| e.to_string())?;
                    let report = dispatch(alg, &spec.objective, &spec.constraint, cfg)?;
                    let run = RunReport::new(&spec.label, cfg, &report, fstar);
                    let stem = path
                        .file_stem()
                        .and_then(|s| s.to_str())
                        .unwrap_or("instance")
                        .to_string();
                    let dir = report_dir
                        .map(Path::to_path_buf)
                        .or_else(|| path.parent().map(Path::to_path_buf))
                        .unwrap_or_default();
                    let out = dir.join(format!("{stem}-report.json"));
                    std::fs::write(&out, serde_json::to_string_pretty(&run).unwrap())
                        .map_err(|e| e.to_string())?;
                    Ok(format!(
                        "{}: best f = {:.12} -> {}",
                        stem,
                        run.best_f,
                        out.display()
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker does not panic"))
            .collect()
    });
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(line) => eprintln!("{line}"),
            Err(e) => failures.push(e),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

/// Accepts either a full instance file or a bare objective file.
fn load_objective(path: &Path) -> Result<Objective, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    if let Ok(spec) = serde_json::from_str::<InstanceSpec>(&text) {
        return Ok(spec.objective);
    }
    serde_json::from_str::<Objective>(&text).map_err(|e| e.to_string())
}

fn check(args: CheckArgs) -> Result<(), String> {
    let objective = load_objective(&args.instance)?;
    let seed = effective_seed(args.seed);
    let report = match args.property {
        PropertyName::WeakDr => check_weak_dr(&objective, args.trials, args.tol, seed),
        PropertyName::Dr => check_dr(&objective, args.trials, args.tol, seed),
        PropertyName::Submodular => check_submodular_0th(&objective, args.trials, args.tol, seed),
        PropertyName::Monotone => check_monotone(&objective, args.trials, args.tol, seed),
        PropertyName::AlphaDr => {
            let text = args
                .alpha
                .ok_or_else(|| "alpha-dr needs --alpha, e.g. \"1,-1\"".to_string())?;
            let alpha: Result<Vec<f64>, _> =
                text.split(',').map(|v| v.trim().parse::<f64>()).collect();
            check_alpha_dr(
                &objective,
                &alpha.map_err(|_| "bad --alpha vector".to_string())?,
                args.trials,
                args.tol,
                seed,
            )
        }
    }
    .map_err(|e| e.to_string())?;
    write_json(&report, args.output.as_deref())?;
    if report.pass {
        Ok(())
    } else {
        Err(format!(
            "property `{}` violated (worst violation {:.3e})",
            report.property, report.worst_violation
        ))
    }
}

fn meanfield(args: MeanfieldArgs) -> Result<(), String> {
    let text = std::fs::read_to_string(&args.model).map_err(|e| e.to_string())?;
    let model: SetFunctionModel = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let objective = match &args.model2 {
        None => build_elbo(&model).map_err(|e| e.to_string())?,
        Some(path) => {
            let text2 = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            let model2: SetFunctionModel =
                serde_json::from_str(&text2).map_err(|e| e.to_string())?;
            let pa = PaModel::new(model.clone(), model2, args.beta.unwrap_or(1.0))
                .map_err(|e| e.to_string())?;
            build_pa_elbo(&pa).map_err(|e| e.to_string())?
        }
    };
    let mut cfg = SolverConfig {
        iterations: args.epochs,
        seed: effective_seed(args.seed),
        ..Default::default()
    };
    if let Some(text) = &args.init {
        cfg.init = parse_init(text)?;
    }
    let boxc = objective.domain().clone();
    let report = match args.alg {
        MeanfieldAlg::Half => dg_meanfield(&objective, &boxc, &cfg, DoubleGreedyVariant::Half),
        MeanfieldAlg::Third => dg_meanfield(&objective, &boxc, &cfg, DoubleGreedyVariant::Third),
        MeanfieldAlg::Coord => coordinate_ascent(&objective, &boxc, &cfg),
    }
    .map_err(|e| e.to_string())?;
    let label = args.model.display().to_string();
    let run = RunReport::new(&label, &cfg, &report, None);
    if let Some(csv_path) = &args.csv {
        std::fs::write(csv_path, run.trajectory_csv()).map_err(|e| e.to_string())?;
    }
    write_json(&run, args.output.as_deref())?;
    if model.ground_set_size() <= 20 && args.model2.is_none() {
        let log_z = log_partition_exact(&model, 1.0).map_err(|e| e.to_string())?;
        eprintln!(
            "{}: bound = {:.12}, exact log Z = {:.12}",
            run.algorithm, run.best_f, log_z
        );
    } else {
        eprintln!("{}: bound = {:.12}", run.algorithm, run.best_f);
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), String> {
    let spec = InstanceSpec::load(&args.instance).map_err(|e| e.to_string())?;
    let (point, value) =
        grid_max(&spec.objective, &spec.constraint, args.grid).map_err(|e| e.to_string())?;
    #[derive(serde::Serialize)]
    struct OracleOut {
        f_star: f64,
        x_star: Vec<f64>,
        resolution: usize,
    }
    write_json(
        &OracleOut {
            f_star: value,
            x_star: point.0,
            resolution: args.grid,
        },
        args.output.as_deref(),
    )?;
    Ok(())
}
