//! Experiment orchestration: instance construction, seeded repetitions, aggregation,
//! CSV output, and the flat key-value experiment spec format.

mod csv;
mod generators;
mod spec_file;

pub use csv::{read_csv, write_csv, write_report_csv, CsvRow, CSV_HEADER};
pub use generators::{
    bipartite_from_edges, generate_random_vertices, random_linear_weights, random_probabilities, synthetic_bipartite,
    synthetic_graph,
};
pub use spec_file::{parse_spec, read_spec};

use std::fmt;
use std::path::PathBuf;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{simplex_vertices, BoxConstraint, Point, VPolytope};
use crate::io::{read_dimacs, read_edge_list, read_vertex_set};
use crate::objectives::{make_coverage_instance, Objective};
use crate::oracles::{GradientOracle, NoiseMode, ValueOracle};
use crate::seeding::mix_seed;
use crate::solvers::{
    best_vertex, frank_wolfe, generalized_ldgm, ldgm, ldgm_box, ldgm_g, scg, SolverConfig, SolverKind, SolverReport,
};

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    BudgetSynthetic {
        n_sources: usize,
        n_targets: usize,
        n_edges: usize,
        p_range: (f64, f64),
        seed: u64,
    },
    /// Edge list on disk; activation probabilities drawn from `p_range` with `seed`.
    BudgetFile {
        path: PathBuf,
        p_range: (f64, f64),
        seed: u64,
    },
    CoverageSynthetic {
        n_nodes: usize,
        n_edges: usize,
        seed: u64,
    },
    CoverageFile {
        path: PathBuf,
        seed: u64,
    },
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::BudgetSynthetic { n_sources, n_targets, n_edges, p_range, seed } => write!(
                f,
                "budget_synthetic n_sources={n_sources} n_targets={n_targets} n_edges={n_edges} p_low={} p_high={} seed={seed}",
                p_range.0, p_range.1
            ),
            InstanceSpec::BudgetFile { path, p_range, seed } => {
                write!(f, "budget_file path={} p_low={} p_high={} seed={seed}", path.display(), p_range.0, p_range.1)
            }
            InstanceSpec::CoverageSynthetic { n_nodes, n_edges, seed } => {
                write!(f, "coverage_synthetic n_nodes={n_nodes} n_edges={n_edges} seed={seed}")
            }
            InstanceSpec::CoverageFile { path, seed } => write!(f, "coverage_file path={} seed={seed}", path.display()),
        }
    }
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Box<dyn Objective<f64>>> {
        Ok(match self {
            InstanceSpec::BudgetSynthetic { n_sources, n_targets, n_edges, p_range, seed } => {
                Box::new(synthetic_bipartite(*n_sources, *n_targets, *n_edges, *p_range, *seed)?)
            }
            InstanceSpec::BudgetFile { path, p_range, seed } => {
                Box::new(bipartite_from_edges(read_edge_list(path)?, *p_range, *seed)?)
            }
            InstanceSpec::CoverageSynthetic { n_nodes, n_edges, seed } => {
                let graph = synthetic_graph(*n_nodes, *n_edges, *seed)?;
                Box::new(make_coverage_instance::<f64>(&graph, mix_seed(&[*seed, 1]))?)
            }
            InstanceSpec::CoverageFile { path, seed } => {
                Box::new(make_coverage_instance::<f64>(&read_dimacs(path)?, *seed)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintSpec {
    /// `Σ x_i <= k`, `x >= 0`.
    Size { k: f64 },
    /// `a^T x <= b`, `x >= 0`.
    Simplex { a: Point<f64>, b: f64 },
    /// `a^T x <= k`, `x >= 0`, with `a` uniform on `(a_low, a_high)^n`.
    Linear { a_range: (f64, f64), k: f64, seed: u64 },
    /// `k · conv(E)` for `n_vertices` uniform points of `[0, 1]^n`.
    RandomVertexHull { k: f64, n_vertices: usize, seed: u64 },
    /// `a^T x <= b`, `0 <= x <= c`.
    BoxLinear { a: Point<f64>, b: f64, c: Point<f64> },
    /// `conv(E)` for a vertex-set file.
    VertexFile { path: PathBuf },
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |p: &Point<f64>| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match self {
            ConstraintSpec::Size { k } => write!(f, "size k={k}"),
            ConstraintSpec::Simplex { a, b } => write!(f, "simplex a={} b={b}", join(a)),
            ConstraintSpec::VertexFile { path } => write!(f, "vertex_file path={}", path.display()),
            ConstraintSpec::Linear { a_range, k, seed } => {
                write!(f, "linear a_low={} a_high={} k={k} seed={seed}", a_range.0, a_range.1)
            }
            ConstraintSpec::RandomVertexHull { k, n_vertices, seed } => {
                write!(f, "random_vertex_hull k={k} n_vertices={n_vertices} seed={seed}")
            }
            ConstraintSpec::BoxLinear { a, b, c } => write!(f, "box_linear a={} b={b} c={}", join(a), join(c)),
        }
    }
}

impl ConstraintSpec {
    fn name(&self) -> &'static str {
        match self {
            ConstraintSpec::Size { .. } => "size",
            ConstraintSpec::Simplex { .. } => "simplex",
            ConstraintSpec::VertexFile { .. } => "vertex_file",
            ConstraintSpec::Linear { .. } => "linear",
            ConstraintSpec::RandomVertexHull { .. } => "random_vertex_hull",
            ConstraintSpec::BoxLinear { .. } => "box_linear",
        }
    }

    /// Vertex set of the polytope. For `box_linear` this is the simplex part only.
    pub fn build(&self, dim: usize) -> Result<VPolytope<f64>> {
        match self {
            ConstraintSpec::Size { k } => simplex_vertices(&Point::new(vec![1.0; dim])?, *k),
            ConstraintSpec::Simplex { a, b } => {
                ensure_dim(dim, a.dim())?;
                simplex_vertices(a, *b)
            }
            ConstraintSpec::VertexFile { path } => {
                let poly = read_vertex_set(path)?;
                ensure_dim(dim, poly.dim())?;
                Ok(poly)
            }
            ConstraintSpec::Linear { a_range, k, seed } => {
                simplex_vertices(&random_linear_weights(dim, a_range.0, a_range.1, *seed)?, *k)
            }
            ConstraintSpec::RandomVertexHull { k, n_vertices, seed } => {
                generate_random_vertices(dim, *n_vertices, *k, *seed)
            }
            ConstraintSpec::BoxLinear { a, b, .. } => {
                ensure_dim(dim, a.dim())?;
                simplex_vertices(a, *b)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverEntry {
    pub kind: SolverKind,
    /// Column value in the CSV; defaults to the solver name.
    pub label: String,
    pub config: SolverConfig<f64>,
    /// Each run keeps a random subset of this fraction of `E` (at least one vertex).
    pub vertex_fraction: f64,
}

impl SolverEntry {
    pub fn new(kind: SolverKind, config: SolverConfig<f64>) -> Self {
        Self { kind, label: kind.to_string(), config, vertex_fraction: 1.0 }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_vertex_fraction(mut self, fraction: f64) -> Self {
        self.vertex_fraction = fraction;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub instance: InstanceSpec,
    pub constraint: ConstraintSpec,
    pub solvers: Vec<SolverEntry>,
    pub noise: NoiseMode<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::param("repetitions must be at least 1"));
        }
        for entry in &self.solvers {
            entry.config.validate()?;
            if !(entry.vertex_fraction > 0.0 && entry.vertex_fraction <= 1.0) {
                return Err(Error::param(format!("vertex fraction {} must lie in (0, 1]", entry.vertex_fraction)));
            }
        }
        Ok(())
    }

    /// Seed of repetition `rep` of solver entry `solver`.
    pub fn run_seed(&self, rep: usize, solver: usize) -> u64 {
        mix_seed(&[self.base_seed, rep as u64, solver as u64])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub repetition: usize,
    pub seed: u64,
    pub report: SolverReport<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub repetition: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverAggregate {
    pub label: String,
    pub kind: SolverKind,
    pub runs: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
    /// Per-iteration mean of exact values over successful runs. Shorter trajectories,
    /// including those of other solvers in the experiment, are padded with their last entry.
    pub mean: Vec<f64>,
    /// Per-iteration sample standard deviation (`n − 1` denominator; 0 for a single run).
    pub std: Vec<f64>,
    pub mean_calls: Vec<f64>,
}

impl SolverAggregate {
    pub fn finals(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.report.final_value()).collect()
    }

    pub fn mean_final(&self) -> f64 {
        self.mean.last().copied().unwrap_or(f64::NAN)
    }

    pub fn std_final(&self) -> f64 {
        self.std.last().copied().unwrap_or(f64::NAN)
    }

    pub fn total_calls(&self) -> u64 {
        self.runs.iter().map(|r| r.report.total_calls()).sum()
    }

    /// Per-run trajectory values padded to `len`.
    pub fn padded_values(&self, len: usize) -> Vec<Vec<f64>> {
        self.runs.iter().map(|r| pad(r.report.trajectory.iter().map(|p| p.value).collect(), len)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateResult {
    pub spec: ExperimentSpec,
    pub solvers: Vec<SolverAggregate>,
}

impl AggregateResult {
    pub fn solver(&self, label: &str) -> Option<&SolverAggregate> {
        self.solvers.iter().find(|s| s.label == label)
    }
}

fn pad(mut values: Vec<f64>, len: usize) -> Vec<f64> {
    if let Some(&last) = values.last() {
        values.resize(len.max(values.len()), last);
    }
    values
}

fn mean_std(column: &[f64]) -> (f64, f64) {
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let std = if column.len() > 1 {
        (column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

fn aggregate(
    label: String,
    kind: SolverKind,
    outcomes: Vec<(usize, u64, Result<SolverReport<f64>>)>,
) -> SolverAggregate {
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for (repetition, seed, outcome) in outcomes {
        match outcome {
            Ok(report) => runs.push(RunRecord { repetition, seed, report }),
            Err(e) => failures.push(RunFailure { repetition, seed, message: e.to_string() }),
        }
    }
    let len = runs.iter().map(|r| r.report.trajectory.len()).max().unwrap_or(0);
    let values: Vec<Vec<f64>> =
        runs.iter().map(|r| pad(r.report.trajectory.iter().map(|p| p.value).collect(), len)).collect();
    let calls: Vec<Vec<f64>> =
        runs.iter().map(|r| pad(r.report.trajectory.iter().map(|p| p.calls as f64).collect(), len)).collect();
    let mut mean = Vec::with_capacity(len);
    let mut std = Vec::with_capacity(len);
    let mut mean_calls = Vec::with_capacity(len);
    for t in 0..len {
        let column: Vec<f64> = values.iter().map(|v| v[t]).collect();
        let (m, s) = mean_std(&column);
        mean.push(m);
        std.push(s);
        mean_calls.push(calls.iter().map(|c| c[t]).sum::<f64>() / calls.len() as f64);
    }
    SolverAggregate { label, kind, runs, failures, mean, std, mean_calls }
}

fn vertex_subset(poly: &VPolytope<f64>, fraction: f64, seed: u64) -> Result<VPolytope<f64>> {
    let n = poly.vertices().len();
    let keep = ((fraction * n as f64).round() as usize).clamp(1, n);
    if keep == n {
        return Ok(poly.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0x5EB5E7]));
    let mut indices = sample(&mut rng, n, keep).into_vec();
    indices.sort_unstable();
    poly.subset(&indices)
}

fn gradient_oracle<'a>(
    objective: &'a dyn Objective<f64>,
    noise: NoiseMode<f64>,
    cfg: &SolverConfig<f64>,
    seed: u64,
) -> Result<GradientOracle<'a, f64>> {
    if let Some(step) = cfg.fd_step {
        return GradientOracle::forward_difference(ValueOracle::new(objective, noise, seed)?, step);
    }
    match noise {
        NoiseMode::Exact => GradientOracle::analytic(objective),
        NoiseMode::StochasticBatch { batch, sampling, .. } => {
            GradientOracle::stochastic_batch(objective, batch, sampling, seed)
        }
        NoiseMode::Additive { .. } => {
            Err(Error::param("gradient solvers under additive noise need a forward-difference step"))
        }
    }
}

/// One solver run on a prepared instance.
pub fn run_single(
    objective: &dyn Objective<f64>,
    constraint: &ConstraintSpec,
    poly: &VPolytope<f64>,
    entry: &SolverEntry,
    noise: NoiseMode<f64>,
    seed: u64,
) -> Result<SolverReport<f64>> {
    let unsupported =
        || Error::UnsupportedConstraint { solver: entry.kind.to_string(), constraint: constraint.name().to_string() };
    let is_box = matches!(constraint, ConstraintSpec::BoxLinear { .. });
    if is_box != (entry.kind == SolverKind::LdgmBox) {
        return Err(unsupported());
    }
    let poly = vertex_subset(poly, entry.vertex_fraction, seed)?;
    let cfg = &entry.config;
    let mut report = match entry.kind {
        SolverKind::FrankWolfe => frank_wolfe(&mut gradient_oracle(objective, noise, cfg, seed)?, &poly, cfg, seed)?,
        SolverKind::Scg => scg(&mut gradient_oracle(objective, noise, cfg, seed)?, &poly, cfg, seed)?,
        kind => {
            let mut oracle = ValueOracle::new(objective, noise, seed)?;
            match kind {
                SolverKind::Ldgm => ldgm(&mut oracle, &poly, cfg)?,
                SolverKind::LdgmG => ldgm_g(&mut oracle, &poly, cfg)?,
                SolverKind::GeneralizedLdgm => generalized_ldgm(&mut oracle, &poly, cfg)?,
                SolverKind::BestVertex => best_vertex(&mut oracle, &poly)?,
                SolverKind::LdgmBox => match constraint {
                    ConstraintSpec::BoxLinear { a, b, c } => {
                        ldgm_box(&mut oracle, a, *b, &BoxConstraint::upper(c.clone())?, cfg)?
                    }
                    _ => return Err(unsupported()),
                },
                SolverKind::FrankWolfe | SolverKind::Scg => unreachable!(),
            }
        }
    };
    report.seed = seed;
    Ok(report)
}

/// Runs every solver entry `repetitions` times on one shared instance.
///
/// Runs execute in parallel; results do not depend on scheduling. Per-run failures are
/// recorded in the aggregate rather than aborting the sweep.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<AggregateResult> {
    spec.validate()?;
    let objective = spec.instance.build()?;
    let poly = spec.constraint.build(objective.dim())?;
    let jobs: Vec<(usize, usize)> =
        (0..spec.solvers.len()).flat_map(|s| (0..spec.repetitions).map(move |r| (s, r))).collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(s, r)| {
            let seed = spec.run_seed(r, s);
            let outcome = run_single(objective.as_ref(), &spec.constraint, &poly, &spec.solvers[s], spec.noise, seed);
            if let Err(e) = &outcome {
                log::warn!("{} repetition {r} failed: {e}", spec.solvers[s].label);
            }
            (s, r, seed, outcome)
        })
        .collect();

    let mut per_solver: Vec<Vec<_>> = (0..spec.solvers.len()).map(|_| Vec::new()).collect();
    for (s, r, seed, outcome) in outcomes {
        per_solver[s].push((r, seed, outcome));
    }
    let mut solvers: Vec<SolverAggregate> = spec
        .solvers
        .iter()
        .zip(per_solver)
        .map(|(entry, outcomes)| aggregate(entry.label.clone(), entry.kind, outcomes))
        .collect();
    // Single-shot baselines become flat lines over the longest trajectory.
    let len = solvers.iter().map(|s| s.mean.len()).max().unwrap_or(0);
    for s in &mut solvers {
        s.mean = pad(std::mem::take(&mut s.mean), len);
        s.std = pad(std::mem::take(&mut s.std), len);
        s.mean_calls = pad(std::mem::take(&mut s.mean_calls), len);
    }
    Ok(AggregateResult { spec: spec.clone(), solvers })
}
