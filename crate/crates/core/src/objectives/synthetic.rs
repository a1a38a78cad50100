//! Closed-form fixtures with known curvature, used to validate estimators and solvers.

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::dot;
use crate::geometry::Point;
use crate::objectives::Objective;
use crate::scalar::Scalar;

fn positive_weights<T: Scalar>(c: &[T], what: &str) -> Result<()> {
    if c.is_empty() {
        return Err(Error::param(format!("{what}: empty weight vector")));
    }
    if let Some(i) = c.iter().position(|&ci| !(ci > T::zero()) || !ci.is_finite()) {
        return Err(Error::param(format!("{what}: weight c[{i}] must be positive")));
    }
    Ok(())
}

/// `f(x) = <c, x>` with `c > 0`.
#[derive(Clone, Debug)]
pub struct Modular<T> {
    c: Vec<T>,
}

impl<T: Scalar> Modular<T> {
    pub fn new(c: Vec<T>) -> Result<Self> {
        positive_weights(&c, "modular")?;
        Ok(Self { c })
    }
}

impl<T: Scalar> Objective<T> for Modular<T> {
    fn name(&self) -> &str {
        "modular"
    }

    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.c.len(), x.dim())?;
        Ok(dot(&self.c, x.coords()))
    }

    fn has_gradient(&self) -> bool {
        true
    }

    fn gradient(&self, x: &Point<T>) -> Result<Vec<T>> {
        ensure_dim(self.c.len(), x.dim())?;
        Ok(self.c.clone())
    }
}

/// `f(x) = Σ c_i x_i^{γ_i}` with `γ_i ∈ (0, 1]`.
#[derive(Clone, Debug)]
pub struct SeparableConcave<T> {
    c: Vec<T>,
    exponents: Vec<T>,
}

impl<T: Scalar> SeparableConcave<T> {
    pub fn new(c: Vec<T>, exponents: Vec<T>) -> Result<Self> {
        positive_weights(&c, "separable_concave")?;
        ensure_dim(c.len(), exponents.len())?;
        if let Some(i) = exponents.iter().position(|&g| !(g > T::zero() && g <= T::one())) {
            return Err(Error::param(format!("separable_concave: exponent {i} outside (0, 1]")));
        }
        Ok(Self { c, exponents })
    }
}

impl<T: Scalar> Objective<T> for SeparableConcave<T> {
    fn name(&self) -> &str {
        "separable_concave"
    }

    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.c.len(), x.dim())?;
        Ok(self.c.iter().zip(&self.exponents).zip(x.coords()).map(|((&c, &g), &xi)| c * xi.powf(g)).sum())
    }

    fn has_gradient(&self) -> bool {
        true
    }

    /// Infinite at `x_i = 0` whenever `γ_i < 1`.
    fn gradient(&self, x: &Point<T>) -> Result<Vec<T>> {
        ensure_dim(self.c.len(), x.dim())?;
        Ok(self
            .c
            .iter()
            .zip(&self.exponents)
            .zip(x.coords())
            .map(|((&c, &g), &xi)| c * g * xi.powf(g - T::one()))
            .collect())
    }
}

/// `f(x) = <c, x> − ½ xᵀHx` with `H` symmetric and entrywise non-negative. Monotone only on
/// the region `Hx <= c`; callers pick constraint sets inside it.
#[derive(Clone, Debug)]
pub struct QuadraticTest<T> {
    c: Vec<T>,
    h: Vec<Vec<T>>,
}

impl<T: Scalar> QuadraticTest<T> {
    pub fn new(c: Vec<T>, h: Vec<Vec<T>>) -> Result<Self> {
        positive_weights(&c, "quadratic_test")?;
        ensure_dim(c.len(), h.len())?;
        for (i, row) in h.iter().enumerate() {
            ensure_dim(c.len(), row.len())?;
            for (j, &hij) in row.iter().enumerate() {
                if hij < T::zero() {
                    return Err(Error::param(format!("quadratic_test: H[{i}][{j}] is negative")));
                }
                if hij != h[j][i] {
                    return Err(Error::param("quadratic_test: H must be symmetric"));
                }
            }
        }
        Ok(Self { c, h })
    }

    /// Whether `∇f(x) = c − Hx >= 0`, i.e. `x` lies where the function is monotone.
    pub fn is_monotone_at(&self, x: &Point<T>) -> bool {
        self.c.iter().zip(&self.h).all(|(&ci, row)| ci - dot(row, x.coords()) >= T::zero())
    }
}

impl<T: Scalar> Objective<T> for QuadraticTest<T> {
    fn name(&self) -> &str {
        "quadratic_test"
    }

    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.c.len(), x.dim())?;
        let xs = x.coords();
        let quad: T = self.h.iter().zip(xs).map(|(row, &xi)| xi * dot(row, xs)).sum();
        Ok(dot(&self.c, xs) - T::lit(0.5) * quad)
    }

    fn has_gradient(&self) -> bool {
        true
    }

    fn gradient(&self, x: &Point<T>) -> Result<Vec<T>> {
        ensure_dim(self.c.len(), x.dim())?;
        Ok(self.c.iter().zip(&self.h).map(|(&ci, row)| ci - dot(row, x.coords())).collect())
    }
}

/// Parameters for one of the synthetic fixtures.
#[derive(Clone, Debug, PartialEq)]
pub enum SyntheticSpec<T> {
    Modular { c: Vec<T> },
    SeparableConcave { c: Vec<T>, exponents: Vec<T> },
    QuadraticTest { c: Vec<T>, h: Vec<Vec<T>> },
}

impl<T: Scalar> SyntheticSpec<T> {
    pub fn build(self, dim: usize) -> Result<Box<dyn Objective<T>>> {
        let obj: Box<dyn Objective<T>> = match self {
            SyntheticSpec::Modular { c } => Box::new(Modular::new(c)?),
            SyntheticSpec::SeparableConcave { c, exponents } => Box::new(SeparableConcave::new(c, exponents)?),
            SyntheticSpec::QuadraticTest { c, h } => Box::new(QuadraticTest::new(c, h)?),
        };
        ensure_dim(dim, obj.dim())?;
        Ok(obj)
    }
}

/// Wraps a closure as an objective. Handy for one-off test functions.
pub struct FnObjective<F> {
    name: String,
    dim: usize,
    f: F,
}

impl<F> FnObjective<F> {
    pub fn new(name: impl Into<String>, dim: usize, f: F) -> Self {
        Self { name: name.into(), dim, f }
    }
}

impl<T, F> Objective<T> for FnObjective<F>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.dim, x.dim())?;
        Ok((self.f)(x.coords()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn examples() {
        let m = SyntheticSpec::Modular { c: vec![1.0, 2.0] }.build(2).unwrap();
        assert_eq!(m.value(&p(&[3.0, 1.0])).unwrap(), 5.0);

        let s = SyntheticSpec::SeparableConcave { c: vec![1.0], exponents: vec![0.5] }.build(1).unwrap();
        assert_eq!(s.value(&p(&[4.0])).unwrap(), 2.0);

        let q = SyntheticSpec::QuadraticTest { c: vec![1.0, 3.0], h: vec![vec![0.5, 0.25], vec![0.25, 1.0]] }
            .build(2)
            .unwrap();
        assert_eq!(q.gradient(&Point::zeros(2)).unwrap(), vec![1.0, 3.0]);
        assert_eq!(q.value(&Point::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_params() {
        assert!(Modular::new(vec![1.0, 0.0]).is_err());
        assert!(SeparableConcave::new(vec![1.0], vec![1.5]).is_err());
        assert!(SeparableConcave::new(vec![1.0], vec![0.0]).is_err());
        assert!(QuadraticTest::new(vec![1.0, 1.0], vec![vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        assert!(QuadraticTest::new(vec![1.0], vec![vec![-1.0]]).is_err());
        assert!(SyntheticSpec::Modular { c: vec![1.0] }.build(2).is_err());
    }

    #[test]
    fn quadratic_monotone_region() {
        let q = QuadraticTest::new(vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(q.is_monotone_at(&p(&[0.5, 1.0])));
        assert!(!q.is_monotone_at(&p(&[1.5, 0.0])));
    }
}
