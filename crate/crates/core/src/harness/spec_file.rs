//! Flat `key = value` experiment files.
//!
//! ```text
//! experiment = fig1a
//! instance = budget_synthetic n_sources=200 n_targets=500 n_edges=2000 seed=1
//! constraint = random_vertex_hull k=5 n_vertices=100 seed=2
//! noise = exact
//! repetitions = 1
//! base_seed = 7
//! solver = ldgm l=60
//! solver = fw l=60
//! ```
//!
//! Each `experiment` line opens a new block. `solver` lines accumulate; other keys may
//! appear once per block. Solver lines default to `l = 60` and the power ρ schedule.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::harness::{ConstraintSpec, ExperimentSpec, InstanceSpec, SolverEntry};
use crate::oracles::{BatchSampling, BatchScope, NoiseMode};
use crate::solvers::{RhoSchedule, SolverConfig, SolverKind};

const DEFAULT_L: usize = 60;

struct Options<'a> {
    line: usize,
    head: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Options<'a> {
    fn parse(line: usize, value: &'a str) -> Result<Self> {
        let mut toks = value.split_whitespace();
        let head = toks.next().ok_or_else(|| Error::parse(line, "missing value"))?;
        let mut values = BTreeMap::new();
        for tok in toks {
            let (k, v) =
                tok.split_once('=').ok_or_else(|| Error::parse(line, format!("expected key=value, found `{tok}`")))?;
            if values.insert(k, v).is_some() {
                return Err(Error::parse(line, format!("option `{k}` given twice")));
            }
        }
        Ok(Self { line, head, values })
    }

    fn take<N: FromStr>(&mut self, key: &str) -> Result<Option<N>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(v) => {
                v.parse().map(Some).map_err(|_| Error::parse(self.line, format!("invalid value `{v}` for `{key}`")))
            }
        }
    }

    fn require<N: FromStr>(&mut self, key: &str) -> Result<N> {
        self.take(key)?.ok_or_else(|| Error::parse(self.line, format!("`{}` needs `{key}`", self.head)))
    }

    fn point(&mut self, key: &str) -> Result<Point<f64>> {
        let raw: String = self.require(key)?;
        let coords = raw
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| Error::parse(self.line, format!("invalid number `{c}` in `{key}`"))))
            .collect::<Result<Vec<_>>>()?;
        Point::new(coords).map_err(|e| Error::parse(self.line, e.to_string()))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::parse(self.line, format!("unknown option `{k}` for `{}`", self.head))),
        }
    }
}

fn resolve(base: Option<&Path>, raw: String) -> PathBuf {
    let path = PathBuf::from(raw);
    match base {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

fn parse_instance(mut o: Options<'_>, base: Option<&Path>) -> Result<InstanceSpec> {
    let p_range = |o: &mut Options<'_>| -> Result<(f64, f64)> {
        Ok((o.take("p_low")?.unwrap_or(0.0), o.take("p_high")?.unwrap_or(0.4)))
    };
    let spec = match o.head {
        "budget_synthetic" => InstanceSpec::BudgetSynthetic {
            n_sources: o.require("n_sources")?,
            n_targets: o.require("n_targets")?,
            n_edges: o.require("n_edges")?,
            p_range: p_range(&mut o)?,
            seed: o.take("seed")?.unwrap_or(0),
        },
        "budget_file" => InstanceSpec::BudgetFile {
            path: resolve(base, o.require("path")?),
            p_range: p_range(&mut o)?,
            seed: o.take("seed")?.unwrap_or(0),
        },
        "coverage_synthetic" => InstanceSpec::CoverageSynthetic {
            n_nodes: o.require("n_nodes")?,
            n_edges: o.require("n_edges")?,
            seed: o.take("seed")?.unwrap_or(0),
        },
        "coverage_file" => {
            InstanceSpec::CoverageFile { path: resolve(base, o.require("path")?), seed: o.take("seed")?.unwrap_or(0) }
        }
        other => return Err(Error::parse(o.line, format!("unknown instance kind `{other}`"))),
    };
    o.finish()?;
    Ok(spec)
}

fn parse_constraint(mut o: Options<'_>, base: Option<&Path>) -> Result<ConstraintSpec> {
    let spec = match o.head {
        "size" => ConstraintSpec::Size { k: o.require("k")? },
        "simplex" => ConstraintSpec::Simplex { a: o.point("a")?, b: o.require("b")? },
        "vertex_file" => ConstraintSpec::VertexFile { path: resolve(base, o.require("path")?) },
        "linear" => ConstraintSpec::Linear {
            a_range: (o.take("a_low")?.unwrap_or(0.0), o.take("a_high")?.unwrap_or(50.0)),
            k: o.require("k")?,
            seed: o.take("seed")?.unwrap_or(0),
        },
        "random_vertex_hull" => ConstraintSpec::RandomVertexHull {
            k: o.require("k")?,
            n_vertices: o.take("n_vertices")?.unwrap_or(100),
            seed: o.take("seed")?.unwrap_or(0),
        },
        "box_linear" => ConstraintSpec::BoxLinear { a: o.point("a")?, b: o.require("b")?, c: o.point("c")? },
        other => return Err(Error::parse(o.line, format!("unknown constraint kind `{other}`"))),
    };
    o.finish()?;
    Ok(spec)
}

fn parse_noise(mut o: Options<'_>) -> Result<NoiseMode<f64>> {
    let mode = match o.head {
        "exact" => NoiseMode::Exact,
        "additive" => NoiseMode::Additive { delta: o.require("delta")? },
        "batch" => {
            let sampling = match o.take::<String>("sampling")?.as_deref() {
                None | Some("with") => BatchSampling::WithReplacement,
                Some("without") => BatchSampling::WithoutReplacement,
                Some(other) => return Err(Error::parse(o.line, format!("unknown sampling `{other}`"))),
            };
            let scope = match o.take::<String>("scope")?.as_deref() {
                None | Some("call") => BatchScope::PerCall,
                Some("round") => BatchScope::PerRound,
                Some(other) => return Err(Error::parse(o.line, format!("unknown batch scope `{other}`"))),
            };
            NoiseMode::StochasticBatch { batch: o.require("size")?, sampling, scope }
        }
        other => return Err(Error::parse(o.line, format!("unknown noise mode `{other}`"))),
    };
    o.finish()?;
    Ok(mode)
}

fn parse_solver(mut o: Options<'_>) -> Result<SolverEntry> {
    let kind: SolverKind = o.head.parse().map_err(|e: Error| Error::parse(o.line, e.to_string()))?;
    let mut config = SolverConfig::new(o.take("l")?.unwrap_or(DEFAULT_L))
        .with_gamma(o.take("gamma")?.unwrap_or(1))
        .with_rho(o.take::<RhoSchedule>("rho")?.unwrap_or(RhoSchedule::Power));
    if let Some(a) = o.take("fd_step")? {
        config = config.with_fd_step(a);
    }
    config.validate().map_err(|e| Error::parse(o.line, e.to_string()))?;
    let mut entry = SolverEntry::new(kind, config);
    if let Some(label) = o.take::<String>("label")? {
        entry = entry.labeled(label);
    }
    if let Some(fraction) = o.take("vertex_fraction")? {
        entry = entry.with_vertex_fraction(fraction);
    }
    o.finish()?;
    Ok(entry)
}

#[derive(Default)]
struct Block {
    line: usize,
    name: String,
    instance: Option<InstanceSpec>,
    constraint: Option<ConstraintSpec>,
    noise: Option<NoiseMode<f64>>,
    repetitions: Option<usize>,
    base_seed: Option<u64>,
    solvers: Vec<SolverEntry>,
}

impl Block {
    fn build(self) -> Result<ExperimentSpec> {
        let missing = |what: &str| Error::parse(self.line, format!("experiment `{}` has no {what}", self.name));
        let spec = ExperimentSpec {
            instance: self.instance.clone().ok_or_else(|| missing("instance"))?,
            constraint: self.constraint.clone().ok_or_else(|| missing("constraint"))?,
            noise: self.noise.unwrap_or(NoiseMode::Exact),
            repetitions: self.repetitions.unwrap_or(1),
            base_seed: self.base_seed.unwrap_or(0),
            solvers: self.solvers,
            name: self.name,
        };
        spec.validate().map_err(|e| Error::parse(self.line, e.to_string()))?;
        Ok(spec)
    }
}

fn set_once<V>(slot: &mut Option<V>, value: V, line: usize, key: &str) -> Result<()> {
    if slot.replace(value).is_some() {
        return Err(Error::parse(line, format!("`{key}` given twice in one experiment")));
    }
    Ok(())
}

/// Parses experiment blocks; relative file paths resolve against `base_dir` when given.
pub fn parse_spec(text: &str, base_dir: Option<&Path>) -> Result<Vec<ExperimentSpec>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(line, format!("expected `key = value`, found `{content}`")))?;
        if key == "experiment" {
            if value.is_empty() {
                return Err(Error::parse(line, "experiment needs a name"));
            }
            blocks.push(Block { line, name: value.to_string(), ..Block::default() });
            continue;
        }
        if blocks.is_empty() {
            blocks.push(Block { line, name: "experiment".to_string(), ..Block::default() });
        }
        let block = blocks.last_mut().expect("a block is open");
        match key {
            "instance" => {
                set_once(&mut block.instance, parse_instance(Options::parse(line, value)?, base_dir)?, line, key)?
            }
            "constraint" => {
                set_once(&mut block.constraint, parse_constraint(Options::parse(line, value)?, base_dir)?, line, key)?
            }
            "noise" => set_once(&mut block.noise, parse_noise(Options::parse(line, value)?)?, line, key)?,
            "repetitions" => {
                let n = value.parse().map_err(|_| Error::parse(line, format!("invalid repetitions `{value}`")))?;
                set_once(&mut block.repetitions, n, line, key)?
            }
            "base_seed" => {
                let n = value.parse().map_err(|_| Error::parse(line, format!("invalid base_seed `{value}`")))?;
                set_once(&mut block.base_seed, n, line, key)?
            }
            "solver" => block.solvers.push(parse_solver(Options::parse(line, value)?)?),
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }
    if blocks.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "spec defines no experiments"));
    }
    blocks.into_iter().map(Block::build).collect()
}

pub fn read_spec(path: impl AsRef<Path>) -> Result<Vec<ExperimentSpec>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_spec(&text, path.parent())
}
