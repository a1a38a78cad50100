use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

/// Forward-difference gradient `[f(x + a χ_i) − f(x)] / a`, using `n + 1` evaluations of
/// `f` (the base value is shared across coordinates).
pub fn forward_difference_gradient<T, F>(mut f: F, x: &Point<T>, step: T) -> Result<Vec<T>>
where
    T: Scalar,
    F: FnMut(&Point<T>) -> Result<T>,
{
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::param("forward-difference step must be positive"));
    }
    let base = f(x)?;
    (0..x.dim()).map(|i| Ok((f(&x.with_increment(i, step))? - base) / step)).collect()
}
