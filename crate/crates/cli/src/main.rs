//! `ldgm` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or domain error, 2 usage or parse error.
//! Set `LDGM_LOG` (e.g. `LDGM_LOG=info`) for log output on stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldgm::geometry::{is_orthogonal_step_set, step_set};
use ldgm::harness::{
    bipartite_from_edges, read_spec, run_experiment, run_single, synthetic_bipartite, synthetic_graph, write_csv,
    write_report_csv, ConstraintSpec, SolverEntry,
};
use ldgm::io::{read_dimacs, read_edge_list, read_vertex_set};
use ldgm::objectives::{
    estimate_dr_ratio, estimate_submodularity_ratio, make_coverage_instance, FnObjective, Modular, Objective,
    SeparableConcave,
};
use ldgm::oracles::measure_noise_stats;
use ldgm::{BatchSampling, BatchScope, Error, NoiseMode, Point, RhoSchedule, SolverConfig, SolverKind, ValueOracle};

#[derive(Parser)]
#[command(name = "ldgm", version, about = "Lattice-discretization greedy maximization over polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on one instance.
    Solve(SolveArgs),
    /// Run every experiment in a spec file and write CSV + metadata.
    Bench(BenchArgs),
    /// Print the frontier of a vertex-set file.
    Frontier(FrontierArgs),
    /// Estimate the submodularity and DR-submodularity ratios by sampling.
    VerifyRatio(RatioArgs),
    /// Repeat noisy evaluations at one point and report mean and variance.
    NoiseStats(NoiseStatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveKind {
    /// <c, x>
    Modular,
    /// Σ c_i x_i^{e_i}, e_i in (0, 1]
    SeparableConcave,
    /// Σ c_i x_i² (convex, not DR-submodular)
    Square,
    /// Synthetic budget allocation
    Budget,
    /// Budget allocation on an edge-list file
    BudgetFile,
    /// Synthetic maximum coverage
    Coverage,
    /// Maximum coverage on a DIMACS graph
    CoverageFile,
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long, value_enum)]
    objective: ObjectiveKind,
    /// Coefficients, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    c: Vec<f64>,
    /// Exponents for separable-concave, comma-separated.
    #[arg(long, value_delimiter = ',')]
    exponents: Vec<f64>,
    /// Edge-list file (budget-file) or DIMACS file (coverage-file).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n_sources: Option<usize>,
    #[arg(long)]
    n_targets: Option<usize>,
    #[arg(long)]
    n_nodes: Option<usize>,
    #[arg(long)]
    n_edges: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    p_low: f64,
    #[arg(long, default_value_t = 0.4)]
    p_high: f64,
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintKind {
    /// a^T x <= b (a defaults to all ones)
    Simplex,
    /// a^T x <= b with a uniform on (a_low, a_high)^n
    Linear,
    /// k · conv(E) for random E
    RandomHull,
    /// a^T x <= b, 0 <= x <= box
    BoxLinear,
    /// conv(E) from a vertex-set file
    Vertices,
}

#[derive(Args)]
struct ConstraintArgs {
    #[arg(long, value_enum)]
    constraint: ConstraintKind,
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    /// Upper box corner for box-linear.
    #[arg(long = "box", value_delimiter = ',')]
    upper: Vec<f64>,
    #[arg(long)]
    vertices: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    n_vertices: usize,
    #[arg(long, default_value_t = 0.0)]
    a_low: f64,
    #[arg(long, default_value_t = 50.0)]
    a_high: f64,
    #[arg(long, default_value_t = 0)]
    constraint_seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseKind {
    Exact,
    Additive,
    Batch,
}

#[derive(Args)]
struct NoiseArgs {
    #[arg(long, value_enum, default_value = "exact")]
    noise: NoiseKind,
    /// Additive noise amplitude.
    #[arg(long)]
    delta: Option<f64>,
    /// Batch size for stochastic evaluation.
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    without_replacement: bool,
    /// Share one batch across all value calls of a solver round.
    #[arg(long)]
    batch_per_round: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[command(flatten)]
    constraint: ConstraintArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    /// ldgm, ldgm-g, generalized-ldgm, ldgm-box, fw, scg, best-vertex
    #[arg(long)]
    solver: SolverKind,
    #[arg(long)]
    l: usize,
    /// Look-ahead (generalized-ldgm only).
    #[arg(long)]
    gamma: Option<usize>,
    /// constant or power
    #[arg(long, default_value = "power")]
    rho: RhoSchedule,
    /// Forward-difference step for fw/scg.
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trajectory CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FrontierArgs {
    #[arg(long)]
    vertices: PathBuf,
    /// Also print the step set for this many steps.
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Args)]
struct RatioArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Upper corner of the sampling box, comma-separated.
    #[arg(long = "box", value_delimiter = ',', required = true)]
    upper: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct NoiseStatsArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Evaluation point, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    point: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need<T>(value: Option<T>, flag: &str, context: &str) -> CliResult<T> {
    value.ok_or_else(|| usage(format!("{context} requires --{flag}")))
}

fn point(coords: &[f64], flag: &str) -> CliResult<Point<f64>> {
    Point::from_f64(coords).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn build_objective(args: &ObjectiveArgs) -> CliResult<Box<dyn Objective<f64>>> {
    let range = (args.p_low, args.p_high);
    Ok(match args.objective {
        ObjectiveKind::Modular => Box::new(Modular::new(args.c.clone()).map_err(|e| usage(format!("--c: {e}")))?),
        ObjectiveKind::SeparableConcave => Box::new(
            SeparableConcave::new(args.c.clone(), args.exponents.clone())
                .map_err(|e| usage(format!("--c/--exponents: {e}")))?,
        ),
        ObjectiveKind::Square => {
            if args.c.is_empty() || args.c.iter().any(|&c| !(c >= 0.0)) {
                return Err(usage("square requires non-negative --c"));
            }
            let c = args.c.clone();
            let dim = c.len();
            Box::new(FnObjective::new("square", dim, move |x: &[f64]| c.iter().zip(x).map(|(c, x)| c * x * x).sum()))
        }
        ObjectiveKind::Budget => Box::new(synthetic_bipartite(
            need(args.n_sources, "n-sources", "budget")?,
            need(args.n_targets, "n-targets", "budget")?,
            need(args.n_edges, "n-edges", "budget")?,
            range,
            args.instance_seed,
        )?),
        ObjectiveKind::BudgetFile => {
            let edges = read_edge_list(need(args.input.as_ref(), "input", "budget-file")?)?;
            Box::new(bipartite_from_edges(edges, range, args.instance_seed)?)
        }
        ObjectiveKind::Coverage => {
            let graph = synthetic_graph(
                need(args.n_nodes, "n-nodes", "coverage")?,
                need(args.n_edges, "n-edges", "coverage")?,
                args.instance_seed,
            )?;
            Box::new(make_coverage_instance::<f64>(&graph, args.instance_seed)?)
        }
        ObjectiveKind::CoverageFile => {
            let graph = read_dimacs(need(args.input.as_ref(), "input", "coverage-file")?)?;
            Box::new(make_coverage_instance::<f64>(&graph, args.instance_seed)?)
        }
    })
}

fn build_constraint(args: &ConstraintArgs, dim: usize) -> CliResult<ConstraintSpec> {
    Ok(match args.constraint {
        ConstraintKind::Simplex => {
            let a = if args.a.is_empty() { vec![1.0; dim] } else { args.a.clone() };
            ConstraintSpec::Simplex { a: point(&a, "a")?, b: need(args.b, "b", "simplex")? }
        }
        ConstraintKind::Linear => ConstraintSpec::Linear {
            a_range: (args.a_low, args.a_high),
            k: need(args.b, "b", "linear")?,
            seed: args.constraint_seed,
        },
        ConstraintKind::RandomHull => ConstraintSpec::RandomVertexHull {
            k: need(args.k, "k", "random-hull")?,
            n_vertices: args.n_vertices,
            seed: args.constraint_seed,
        },
        ConstraintKind::BoxLinear => {
            let a = if args.a.is_empty() { vec![1.0; dim] } else { args.a.clone() };
            if args.upper.is_empty() {
                return Err(usage("box-linear requires --box"));
            }
            ConstraintSpec::BoxLinear {
                a: point(&a, "a")?,
                b: need(args.b, "b", "box-linear")?,
                c: point(&args.upper, "box")?,
            }
        }
        ConstraintKind::Vertices => {
            ConstraintSpec::VertexFile { path: need(args.vertices.clone(), "vertices", "vertices")? }
        }
    })
}

fn build_noise(args: &NoiseArgs) -> CliResult<NoiseMode<f64>> {
    Ok(match args.noise {
        NoiseKind::Exact => NoiseMode::Exact,
        NoiseKind::Additive => NoiseMode::Additive { delta: need(args.delta, "delta", "additive noise")? },
        NoiseKind::Batch => NoiseMode::StochasticBatch {
            batch: need(args.batch, "batch", "batch noise")?,
            sampling: if args.without_replacement {
                BatchSampling::WithoutReplacement
            } else {
                BatchSampling::WithReplacement
            },
            scope: if args.batch_per_round { BatchScope::PerRound } else { BatchScope::PerCall },
        },
    })
}

fn format_point(p: &Point<f64>) -> String {
    p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_solve(args: SolveArgs) -> CliResult {
    if args.gamma.is_some() && args.solver != SolverKind::GeneralizedLdgm {
        return Err(usage("--gamma applies only to generalized-ldgm"));
    }
    if args.fd_step.is_some() && !args.solver.uses_gradients() {
        return Err(usage("--fd-step applies only to fw and scg"));
    }
    let objective = build_objective(&args.objective)?;
    let constraint = build_constraint(&args.constraint, objective.dim())?;
    let noise = build_noise(&args.noise)?;
    let mut config = SolverConfig::new(args.l).with_gamma(args.gamma.unwrap_or(1)).with_rho(args.rho);
    if let Some(a) = args.fd_step {
        config = config.with_fd_step(a);
    }
    config.validate().map_err(|e| usage(e.to_string()))?;
    let poly = constraint.build(objective.dim())?;
    let entry = SolverEntry::new(args.solver, config);
    let report = run_single(objective.as_ref(), &constraint, &poly, &entry, noise, args.seed)?;
    println!("solver = {}", report.solver);
    println!("f = {}", report.final_value());
    println!("x = {}", format_point(&report.final_point));
    println!("oracle_calls = {}", report.total_calls());
    if report.truncated {
        println!("truncated = true");
    }
    if let Some(out) = &args.out {
        write_report_csv(&entry.label, &report, out)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let specs = read_spec(&args.spec).map_err(|e| usage(e.to_string()))?;
    fs::create_dir_all(&args.out).map_err(|e| Failure::Runtime(format!("{}: {e}", args.out.display())))?;
    for spec in &specs {
        log::info!("running experiment {}", spec.name);
        let result = run_experiment(spec)?;
        let path = args.out.join(format!("{}.csv", spec.name));
        write_csv(&result, &path)?;
        for s in &result.solvers {
            println!(
                "{}\t{}\tmean_final={}\tstd_final={}\tfailures={}",
                spec.name,
                s.label,
                s.mean_final(),
                s.std_final(),
                s.failures.len()
            );
        }
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_frontier(args: FrontierArgs) -> CliResult {
    let poly = read_vertex_set::<f64>(&args.vertices)?;
    println!("vertices = {}", poly.vertices().len());
    println!("frontier = {}", poly.frontier_indices().len());
    for (&i, v) in poly.frontier_indices().iter().zip(poly.frontier()) {
        println!("{i}\t{}", format_point(v));
    }
    if let Some(l) = args.l {
        let steps = step_set(&poly, l).map_err(|e| usage(e.to_string()))?;
        println!("orthogonal = {}", is_orthogonal_step_set(&steps));
        for s in &steps.steps {
            println!("step\t{}", format_point(s));
        }
    }
    Ok(())
}

fn cmd_verify_ratio(args: RatioArgs) -> CliResult {
    let objective = build_objective(&args.objective)?;
    let upper = point(&args.upper, "box")?;
    let alpha = estimate_submodularity_ratio(objective.as_ref(), &upper, args.samples, args.seed)?;
    let beta = estimate_dr_ratio(objective.as_ref(), &upper, args.samples, args.seed)?;
    println!("alpha = {}", alpha.value);
    println!("beta = {}", beta.value);
    println!("samples_used = {}", beta.samples_used);
    let w = &beta.min_witness;
    println!(
        "witness: x = {}  y = {}  i = {}  k = {}  ratio = {}",
        format_point(&w.x),
        format_point(&w.y),
        w.coordinate,
        w.increment,
        w.ratio
    );
    Ok(())
}

fn cmd_noise_stats(args: NoiseStatsArgs) -> CliResult {
    let objective = build_objective(&args.objective)?;
    let x = point(&args.point, "point")?;
    let mut oracle = ValueOracle::new(objective.as_ref(), build_noise(&args.noise)?, args.seed)?;
    let exact = oracle.exact_value(&x)?;
    let (mean, var) = measure_noise_stats(&mut oracle, &x, args.reps)?;
    println!("exact = {exact}");
    println!("mean = {mean}");
    println!("variance = {var}");
    println!("std_error = {}", (var / args.reps as f64).sqrt());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LDGM_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Frontier(a) => cmd_frontier(a),
        Command::VerifyRatio(a) => cmd_verify_ratio(a),
        Command::NoiseStats(a) => cmd_noise_stats(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
