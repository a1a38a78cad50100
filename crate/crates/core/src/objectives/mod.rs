//! Monotone continuous objectives: the budget-allocation and maximum-coverage applications,
//! synthetic fixtures, finite-difference gradients, and sampled estimators of the
//! (DR-)submodularity ratios.

mod budget;
mod coverage;
mod finite_difference;
mod ratio;
mod synthetic;

pub use budget::BipartiteInstance;
pub use coverage::{make_coverage_instance, CoverageInstance, Graph};
pub use finite_difference::forward_difference_gradient;
pub use ratio::{estimate_dr_ratio, estimate_submodularity_ratio, marginal_ratio, RatioEstimate, RatioWitness};
pub use synthetic::{FnObjective, Modular, QuadraticTest, SeparableConcave, SyntheticSpec};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

/// A normalized (`f(0) = 0`) monotone function on the non-negative orthant.
pub trait Objective<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn value(&self, x: &Point<T>) -> Result<T>;

    fn has_gradient(&self) -> bool {
        false
    }

    fn gradient(&self, _x: &Point<T>) -> Result<Vec<T>> {
        Err(Error::GradientUnavailable(self.name().to_string()))
    }

    /// A known Lipschitz constant on the frontier, when one is available analytically.
    fn lipschitz_hint(&self) -> Option<T> {
        None
    }

    /// Per-term view for objectives of the form `f = Σ_j f_j`.
    fn decomposition(&self) -> Option<&dyn Decomposable<T>> {
        None
    }
}

/// An objective that is a finite sum of per-term contributions `f(x) = Σ_j f_j(x)`.
///
/// Callers check the dimension of `x` before using these methods.
pub trait Decomposable<T: Scalar> {
    fn n_terms(&self) -> usize;

    fn term_value(&self, term: usize, x: &Point<T>) -> T;

    /// Adds `scale * ∇f_term(x)` into `out`.
    fn add_term_gradient(&self, term: usize, x: &Point<T>, scale: T, out: &mut [T]) -> Result<()>;
}
