use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::Point;
use crate::objectives::{Decomposable, Objective};
use crate::scalar::Scalar;

/// Simple undirected graph on nodes `0..n_nodes`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n_nodes: usize,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Self-loops are rejected; repeated edges collapse.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::param(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop on node {u}")));
            }
            if !neighbors[u].contains(&v) {
                neighbors[u].push(v);
                neighbors[v].push(u);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self { n_nodes, neighbors })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    /// `{node} ∪ N(node)`, sorted.
    pub fn closed_neighborhood(&self, node: usize) -> Vec<usize> {
        let mut out = self.neighbors[node].clone();
        out.push(node);
        out.sort_unstable();
        out
    }
}

/// Continuous maximum coverage: set `i` reveals element `e` once `x_i >= θ_{i,e}`, and
/// `f(x) = |∪_i p_i(x_i)|`. Confidences are clamped to `[0, 1]`.
#[derive(Clone, Debug)]
pub struct CoverageInstance<T> {
    universe_size: usize,
    set_members: Vec<Vec<usize>>,
    thresholds: Vec<Vec<T>>,
    // Per set, (threshold, element) sorted by threshold so revealed members form a prefix.
    reveal_order: Vec<Vec<(T, usize)>>,
    // Per element, the (set, threshold) pairs able to reveal it.
    coverers: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> CoverageInstance<T> {
    pub fn new(universe_size: usize, set_members: Vec<Vec<usize>>, thresholds: Vec<Vec<T>>) -> Result<Self> {
        if set_members.is_empty() {
            return Err(Error::param("coverage instance needs at least one set"));
        }
        ensure_dim(set_members.len(), thresholds.len())?;
        let mut coverers = vec![Vec::new(); universe_size];
        let mut reveal_order = Vec::with_capacity(set_members.len());
        for (i, (members, thetas)) in set_members.iter().zip(&thresholds).enumerate() {
            ensure_dim(members.len(), thetas.len())?;
            let mut order = Vec::with_capacity(members.len());
            for (&e, &theta) in members.iter().zip(thetas) {
                if e >= universe_size {
                    return Err(Error::param(format!("set {i} contains element {e} outside universe")));
                }
                if !(theta > T::zero() && theta <= T::one()) {
                    return Err(Error::param(format!("threshold for ({i}, {e}) outside (0, 1]")));
                }
                if coverers[e].iter().any(|&(s, _)| s == i) {
                    return Err(Error::param(format!("set {i} lists element {e} twice")));
                }
                coverers[e].push((i, theta));
                order.push((theta, e));
            }
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite thresholds"));
            reveal_order.push(order);
        }
        Ok(Self { universe_size, set_members, thresholds, reveal_order, coverers })
    }

    pub fn n_sets(&self) -> usize {
        self.set_members.len()
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn set_members(&self) -> &[Vec<usize>] {
        &self.set_members
    }

    pub fn reveal_thresholds(&self) -> &[Vec<T>] {
        &self.thresholds
    }

    /// Size of `∪_i C_i`.
    pub fn coverable(&self) -> usize {
        self.coverers.iter().filter(|c| !c.is_empty()).count()
    }
}

impl<T: Scalar> Objective<T> for CoverageInstance<T> {
    fn name(&self) -> &str {
        "max_coverage"
    }

    fn dim(&self) -> usize {
        self.n_sets()
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.n_sets(), x.dim())?;
        let mut seen = vec![false; self.universe_size];
        let mut count = 0usize;
        for (order, &xi) in self.reveal_order.iter().zip(x.coords()) {
            let level = xi.min(T::one());
            for &(theta, e) in order {
                if theta > level {
                    break;
                }
                if !seen[e] {
                    seen[e] = true;
                    count += 1;
                }
            }
        }
        Ok(T::from_usize_lossy(count))
    }

    fn decomposition(&self) -> Option<&dyn Decomposable<T>> {
        Some(self)
    }
}

impl<T: Scalar> Decomposable<T> for CoverageInstance<T> {
    fn n_terms(&self) -> usize {
        self.universe_size
    }

    fn term_value(&self, term: usize, x: &Point<T>) -> T {
        let covered = self.coverers[term].iter().any(|&(s, theta)| theta <= x[s].min(T::one()));
        if covered {
            T::one()
        } else {
            T::zero()
        }
    }

    fn add_term_gradient(&self, _: usize, _: &Point<T>, _: T, _: &mut [T]) -> Result<()> {
        Err(Error::GradientUnavailable(self.name().to_string()))
    }
}

/// Coverage instance whose sets are the closed neighborhoods of `graph`, each member
/// revealed at an i.i.d. uniform threshold on `(0, 1]`.
pub fn make_coverage_instance<T: Scalar>(graph: &Graph, seed: u64) -> Result<CoverageInstance<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = graph.n_nodes();
    let mut members = Vec::with_capacity(n);
    let mut thresholds = Vec::with_capacity(n);
    for node in 0..n {
        let set = graph.closed_neighborhood(node);
        let thetas = set.iter().map(|_| T::lit(1.0 - rng.gen::<f64>())).collect();
        members.push(set);
        thresholds.push(thetas);
    }
    CoverageInstance::new(n, members, thresholds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    fn toy() -> CoverageInstance<f64> {
        // C_1 = {a, b}, C_2 = {b}; a = 0, b = 1.
        CoverageInstance::new(2, vec![vec![0, 1], vec![1]], vec![vec![0.3, 0.7], vec![0.5]]).unwrap()
    }

    #[test]
    fn threshold_evaluation() {
        let inst = toy();
        assert_eq!(inst.value(&p(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(inst.value(&p(&[1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(inst.value(&p(&[0.5, 0.6])).unwrap(), 2.0);
        assert_eq!(inst.value(&p(&[0.5, 0.0])).unwrap(), 1.0);
        // Confidences above one clamp.
        assert_eq!(inst.value(&p(&[7.0, 0.0])).unwrap(), 2.0);
    }

    #[test]
    fn terms_sum_to_value() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (2, 5)]).unwrap();
        let inst = make_coverage_instance::<f64>(&g, 5).unwrap();
        for x in [[0.2; 6], [0.5; 6], [0.9, 0.1, 0.4, 0.0, 1.0, 0.3]] {
            let x = p(&x);
            let sum: f64 = (0..inst.n_terms()).map(|e| inst.term_value(e, &x)).sum();
            assert_eq!(sum, inst.value(&x).unwrap());
        }
    }

    #[test]
    fn generated_from_graph() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let inst = make_coverage_instance::<f64>(&g, 1).unwrap();
        assert_eq!(inst.set_members(), &[vec![0, 1], vec![0, 1]]);
        assert_eq!(inst.reveal_thresholds().iter().map(Vec::len).sum::<usize>(), 4);

        let empty = Graph::from_edges(3, &[]).unwrap();
        let inst = make_coverage_instance::<f64>(&empty, 1).unwrap();
        assert_eq!(inst.set_members(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(inst.value(&p(&[1.0, 1.0, 1.0])).unwrap(), 3.0);

        let a = make_coverage_instance::<f64>(&g, 42).unwrap();
        let b = make_coverage_instance::<f64>(&g, 42).unwrap();
        assert_eq!(a.reveal_thresholds(), b.reveal_thresholds());
        assert!(a.reveal_thresholds().iter().flatten().all(|&t| t > 0.0 && t <= 1.0));
    }

    #[test]
    fn validation() {
        assert!(CoverageInstance::<f64>::new(1, vec![vec![0]], vec![vec![0.0]]).is_err());
        assert!(CoverageInstance::<f64>::new(1, vec![vec![1]], vec![vec![0.5]]).is_err());
        assert!(CoverageInstance::<f64>::new(1, vec![vec![0, 0]], vec![vec![0.5, 0.6]]).is_err());
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(toy().gradient(&p(&[0.1, 0.1])).is_err());
    }
}
