use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, VPolytope};
use crate::objectives::{BipartiteInstance, Graph};

/// `n_vertices` points with i.i.d. uniform `[0, 1]` coordinates, scaled by `k`.
pub fn generate_random_vertices(dim: usize, n_vertices: usize, k: f64, seed: u64) -> Result<VPolytope<f64>> {
    if n_vertices == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::param(format!("vertex scale k must be positive, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = (0..n_vertices)
        .map(|_| Point::new((0..dim).map(|_| k * rng.gen::<f64>()).collect()))
        .collect::<Result<Vec<_>>>()?;
    VPolytope::new(vertices)
}

/// Uniform draw from the open interval `(low, high)`.
pub(crate) fn open_uniform(rng: &mut ChaCha8Rng, low: f64, high: f64) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return low + (high - low) * u;
        }
    }
}

/// Activation probabilities drawn uniformly from `[low, high]`.
pub fn random_probabilities(n: usize, low: f64, high: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low > high {
        return Err(Error::param(format!("probability range [{low}, {high}] must lie in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.gen_range(low..=high)).collect())
}

/// `n_edges` distinct (source, target) pairs sampled uniformly without replacement.
pub fn synthetic_bipartite(
    n_sources: usize,
    n_targets: usize,
    n_edges: usize,
    p_range: (f64, f64),
    seed: u64,
) -> Result<BipartiteInstance<f64>> {
    let pairs = n_sources.checked_mul(n_targets).ok_or_else(|| Error::param("bipartite graph too large"))?;
    if n_edges > pairs {
        return Err(Error::param(format!("{n_edges} edges requested but only {pairs} pairs exist")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> =
        sample(&mut rng, pairs, n_edges).into_iter().map(|i| (i / n_targets, i % n_targets)).collect();
    edges.sort_unstable();
    let probs = random_probabilities(n_sources, p_range.0, p_range.1, rng.gen())?;
    BipartiteInstance::new(n_sources, n_targets, edges, probs)
}

/// Budget instance over a loaded edge list; node counts are one past the largest ids.
pub fn bipartite_from_edges(
    edges: Vec<(usize, usize)>,
    p_range: (f64, f64),
    seed: u64,
) -> Result<BipartiteInstance<f64>> {
    let n_sources = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let n_targets = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let probs = random_probabilities(n_sources, p_range.0, p_range.1, seed)?;
    let mut edges = edges;
    edges.sort_unstable();
    edges.dedup();
    BipartiteInstance::new(n_sources, n_targets, edges, probs)
}

/// Simple undirected graph with `n_edges` distinct edges drawn uniformly.
pub fn synthetic_graph(n_nodes: usize, n_edges: usize, seed: u64) -> Result<Graph> {
    let pairs = n_nodes * n_nodes.saturating_sub(1) / 2;
    if n_edges > pairs {
        return Err(Error::param(format!("{n_edges} edges requested but only {pairs} node pairs exist")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> =
        sample(&mut rng, pairs, n_edges).into_iter().map(|i| unrank_pair(n_nodes, i)).collect();
    edges.sort_unstable();
    Graph::from_edges(n_nodes, &edges)
}

// Row-major enumeration of pairs (u, v) with u < v.
fn unrank_pair(n: usize, mut idx: usize) -> (usize, usize) {
    let mut u = 0;
    while idx >= n - 1 - u {
        idx -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + idx)
}

/// Weights for `a^T x <= b`, each uniform on the open interval `(low, high)`.
pub fn random_linear_weights(n: usize, low: f64, high: f64, seed: u64) -> Result<Point<f64>> {
    if !(low >= 0.0) || !(high > low) {
        return Err(Error::param(format!("weight range ({low}, {high}) must satisfy 0 <= low < high")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Point::new((0..n).map(|_| open_uniform(&mut rng, low, high)).collect())
}
