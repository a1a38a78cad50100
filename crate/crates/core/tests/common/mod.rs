#![allow(dead_code)]

use ldgm::geometry::StepSet;
use ldgm::objectives::{BipartiteInstance, Objective};
use ldgm::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TAU_FEAS: f64 = 1e-9;

pub fn p(c: &[f64]) -> Point<f64> {
    Point::from_f64(c).unwrap()
}

/// Every multiset of `l` indices from `0..m`, as count vectors.
pub fn multisets(m: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == m - 1 {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(m, left - c, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(m, l, 0, &mut vec![0; m], &mut out);
    out
}

pub fn lattice_point(steps: &StepSet<f64>, counts: &[usize]) -> Point<f64> {
    let mut x = Point::zeros(steps.steps[0].dim());
    for (s, &c) in steps.steps.iter().zip(counts) {
        x = x.add_scaled(s, c as f64);
    }
    x
}

/// `max f(Σ_i c_i e_i)` over multisets of exactly `l` steps.
pub fn best_multiset(f: &dyn Objective<f64>, steps: &StepSet<f64>, l: usize) -> f64 {
    multisets(steps.len(), l)
        .iter()
        .map(|c| f.value(&lattice_point(steps, c)).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random budget-allocation instance with every target reachable from some source.
pub fn random_budget(n_sources: usize, n_targets: usize, p_high: f64, seed: u64) -> BipartiteInstance<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for t in 0..n_targets {
        let forced = rng.gen_range(0..n_sources);
        for s in 0..n_sources {
            if s == forced || rng.gen_bool(0.4) {
                edges.push((s, t));
            }
        }
    }
    let probs = (0..n_sources).map(|_| rng.gen_range(0.05..p_high)).collect();
    BipartiteInstance::new(n_sources, n_targets, edges, probs).unwrap()
}
