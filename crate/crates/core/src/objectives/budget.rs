use crate::error::{ensure_dim, Error, Result};
use crate::geometry::Point;
use crate::objectives::{Decomposable, Objective};
use crate::scalar::Scalar;

/// Budget allocation over a bipartite source/target graph.
///
/// `f(x) = Σ_t [1 − Π_{i→t} (1 − p_i)^{x_i}]`: the expected number of activated targets.
#[derive(Clone, Debug)]
pub struct BipartiteInstance<T> {
    n_sources: usize,
    n_targets: usize,
    edges: Vec<(usize, usize)>,
    probs: Vec<T>,
    // ln(1 − p_i); −∞ when p_i = 1.
    log_survival: Vec<T>,
    target_sources: Vec<Vec<usize>>,
}

impl<T: Scalar> BipartiteInstance<T> {
    pub fn new(n_sources: usize, n_targets: usize, edges: Vec<(usize, usize)>, probs: Vec<T>) -> Result<Self> {
        if n_sources == 0 {
            return Err(Error::param("budget allocation needs at least one source"));
        }
        ensure_dim(n_sources, probs.len())?;
        if let Some(i) = probs.iter().position(|&p| !(p >= T::zero() && p <= T::one())) {
            return Err(Error::param(format!("activation probability p[{i}] outside [0, 1]")));
        }
        let mut target_sources = vec![Vec::new(); n_targets];
        for &(s, t) in &edges {
            if s >= n_sources || t >= n_targets {
                return Err(Error::param(format!("edge ({s}, {t}) out of range")));
            }
            if target_sources[t].contains(&s) {
                return Err(Error::param(format!("duplicate edge ({s}, {t})")));
            }
            target_sources[t].push(s);
        }
        let log_survival = probs.iter().map(|&p| (T::one() - p).ln()).collect();
        Ok(Self { n_sources, n_targets, edges, probs, log_survival, target_sources })
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn activation_probs(&self) -> &[T] {
        &self.probs
    }

    /// `Π_{i→t} (1 − p_i)^{x_i}`, with `(1 − 1)^0 = 1`.
    fn survival(&self, target: usize, x: &Point<T>) -> T {
        let mut exponent = T::zero();
        for &s in &self.target_sources[target] {
            let xs = x[s];
            if xs > T::zero() {
                exponent += xs * self.log_survival[s];
            }
        }
        exponent.exp()
    }
}

impl<T: Scalar> Objective<T> for BipartiteInstance<T> {
    fn name(&self) -> &str {
        "budget_allocation"
    }

    fn dim(&self) -> usize {
        self.n_sources
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.n_sources, x.dim())?;
        Ok((0..self.n_targets).map(|t| self.term_value(t, x)).sum())
    }

    fn has_gradient(&self) -> bool {
        true
    }

    /// `∂f/∂x_i = Σ_{t: i→t} −ln(1 − p_i) · Π_{j→t} (1 − p_j)^{x_j}`.
    fn gradient(&self, x: &Point<T>) -> Result<Vec<T>> {
        ensure_dim(self.n_sources, x.dim())?;
        let mut out = vec![T::zero(); self.n_sources];
        for t in 0..self.n_targets {
            self.add_term_gradient(t, x, T::one(), &mut out)?;
        }
        Ok(out)
    }

    fn decomposition(&self) -> Option<&dyn Decomposable<T>> {
        Some(self)
    }
}

impl<T: Scalar> Decomposable<T> for BipartiteInstance<T> {
    fn n_terms(&self) -> usize {
        self.n_targets
    }

    fn term_value(&self, term: usize, x: &Point<T>) -> T {
        if self.target_sources[term].is_empty() {
            return T::zero();
        }
        T::one() - self.survival(term, x)
    }

    fn add_term_gradient(&self, term: usize, x: &Point<T>, scale: T, out: &mut [T]) -> Result<()> {
        let sources = &self.target_sources[term];
        if sources.is_empty() {
            return Ok(());
        }
        if let Some(&s) = sources.iter().find(|&&s| self.probs[s] >= T::one()) {
            return Err(Error::param(format!("gradient undefined: source {s} has activation probability 1")));
        }
        let survival = self.survival(term, x);
        for &s in sources {
            out[s] += scale * (-self.log_survival[s]) * survival;
        }
        Ok(())
    }
}
