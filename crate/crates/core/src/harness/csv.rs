use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::AggregateResult;
use crate::solvers::SolverReport;

pub const CSV_HEADER: &str = "solver,iteration,mean_f,std_f,mean_calls";

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub solver: String,
    pub iteration: usize,
    pub mean_f: f64,
    pub std_f: f64,
    pub mean_calls: f64,
}

// 15 significant digits in scientific notation.
fn num(v: f64) -> String {
    format!("{v:.14e}")
}

fn render_csv(result: &AggregateResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in &result.solvers {
        for (t, ((m, sd), c)) in s.mean.iter().zip(&s.std).zip(&s.mean_calls).enumerate() {
            let _ = writeln!(out, "{},{t},{},{},{}", s.label, num(*m), num(*sd), num(*c));
        }
    }
    out
}

fn render_meta(result: &AggregateResult) -> String {
    let spec = &result.spec;
    let mut out = String::new();
    let _ = writeln!(out, "library = ldgm {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "experiment = {}", spec.name);
    let _ = writeln!(out, "instance = {}", spec.instance);
    let _ = writeln!(out, "constraint = {}", spec.constraint);
    let _ = writeln!(out, "vertex_distribution = uniform [0,1]^n scaled by k");
    let _ = writeln!(out, "noise = {:?}", spec.noise);
    let _ = writeln!(out, "repetitions = {}", spec.repetitions);
    let _ = writeln!(out, "base_seed = {}", spec.base_seed);
    for (i, (entry, agg)) in spec.solvers.iter().zip(&result.solvers).enumerate() {
        let cfg = &entry.config;
        let _ = writeln!(
            out,
            "solver.{i} = {} label={} l={} gamma={} rho={} fd_step={} vertex_fraction={}",
            entry.kind,
            entry.label,
            cfg.l,
            cfg.gamma,
            cfg.rho,
            cfg.fd_step.map_or("none".to_string(), |a| a.to_string()),
            entry.vertex_fraction
        );
        let seeds: Vec<String> = agg.runs.iter().map(|r| r.seed.to_string()).collect();
        let _ = writeln!(out, "solver.{i}.seeds = {}", seeds.join(","));
        let finals: Vec<String> = agg.finals().iter().map(|v| num(*v)).collect();
        let _ = writeln!(out, "solver.{i}.finals = {}", finals.join(","));
        for f in &agg.failures {
            let _ = writeln!(out, "solver.{i}.failure = repetition={} seed={} {}", f.repetition, f.seed, f.message);
        }
    }
    out
}

/// Writes the trajectory table to `path` and the run metadata next to it (`.meta` suffix).
pub fn write_csv(result: &AggregateResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_csv(result)).map_err(|e| Error::io(path, e))?;
    let meta = path.with_extension("meta");
    fs::write(&meta, render_meta(result)).map_err(|e| Error::io(&meta, e))
}

/// Single-run trajectory in the aggregate CSV layout (standard deviation 0).
pub fn write_report_csv(label: &str, report: &SolverReport<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &report.trajectory {
        let _ = writeln!(out, "{label},{},{},{},{}", p.iteration, num(p.value), num(0.0), num(p.calls as f64));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::parse(1, format!("expected header `{CSV_HEADER}`"))),
    }
    lines
        .map(|(i, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::parse(i + 1, format!("expected 5 columns, found {}", cols.len())));
            }
            let float = |s: &str| s.parse::<f64>().map_err(|_| Error::parse(i + 1, format!("invalid number `{s}`")));
            Ok(CsvRow {
                solver: cols[0].to_string(),
                iteration: cols[1].parse().map_err(|_| Error::parse(i + 1, "invalid iteration"))?,
                mean_f: float(cols[2])?,
                std_f: float(cols[3])?,
                mean_calls: float(cols[4])?,
            })
        })
        .collect()
}
