use std::ops::Index;

use crate::error::{ensure_dim, Error, Result};
use crate::scalar::Scalar;

/// A point of the non-negative orthant `R^n_+`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T>(Vec<T>);

impl<T: Scalar> Point<T> {
    /// Validates that every coordinate is finite and non-negative.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        for (index, &c) in coords.iter().enumerate() {
            if !c.is_finite() || c < T::zero() {
                return Err(Error::InvalidCoordinate { index, value: c.to_f64_lossy() });
            }
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![T::zero(); dim])
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::lit(c)).collect())
    }

    /// Callers guarantee non-negativity (sums and non-negative scalings of valid points).
    pub(crate) fn from_raw(coords: Vec<T>) -> Self {
        debug_assert!(coords.iter().all(|c| *c >= T::zero()));
        Point(coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// `self + scale * other`, with `scale >= 0`.
    pub fn add_scaled(&self, other: &Point<T>, scale: T) -> Point<T> {
        debug_assert_eq!(self.dim(), other.dim());
        debug_assert!(scale >= T::zero());
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| a + scale * b).collect())
    }

    pub fn add(&self, other: &Point<T>) -> Point<T> {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn scaled(&self, scale: T) -> Point<T> {
        debug_assert!(scale >= T::zero());
        Point(self.0.iter().map(|&a| a * scale).collect())
    }

    /// `self + amount * χ_index`.
    pub fn with_increment(&self, index: usize, amount: T) -> Point<T> {
        debug_assert!(amount >= T::zero());
        let mut coords = self.0.clone();
        coords[index] += amount;
        Point(coords)
    }

    pub fn dot(&self, other: &Point<T>) -> T {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Componentwise `self <= other` (the partial order of the orthant).
    pub fn le(&self, other: &Point<T>) -> Result<bool> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Strict dominance `y > x`: `y >= x` componentwise with at least one strict coordinate.
///
/// Comparison is exact; no tolerance is applied.
pub fn dominates<T: Scalar>(y: &Point<T>, x: &Point<T>) -> Result<bool> {
    ensure_dim(x.dim(), y.dim())?;
    Ok(dominates_unchecked(y.coords(), x.coords()))
}

pub(crate) fn dominates_unchecked<T: Scalar>(y: &[T], x: &[T]) -> bool {
    let mut strict = false;
    for (a, b) in y.iter().zip(x) {
        if a < b {
            return false;
        }
        if a > b {
            strict = true;
        }
    }
    strict
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(&[0.5, 0.5]), &p(&[0.3, 0.3])).unwrap());
        assert!(!dominates(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap());
        assert!(!dominates(&p(&[1.0, 1.0]), &p(&[1.0, 1.0])).unwrap());
        assert!(dominates(&p(&[1.0, 0.5]), &p(&[1.0, 0.3])).unwrap());
    }

    #[test]
    fn dominance_dimension_mismatch() {
        let err = dominates(&p(&[1.0]), &p(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn rejects_negative_and_empty() {
        assert!(matches!(Point::<f64>::new(vec![]), Err(Error::EmptyPoint)));
        assert!(matches!(Point::new(vec![1.0, -0.1]), Err(Error::InvalidCoordinate { index: 1, .. })));
        assert!(Point::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = p(&[1.0, 2.0]);
        let e = p(&[0.5, 0.0]);
        assert_eq!(x.add_scaled(&e, 2.0).coords(), &[2.0, 2.0]);
        assert_eq!(x.with_increment(1, 1.0).coords(), &[1.0, 3.0]);
        assert_eq!(p(&[3.0, 4.0]).norm(), 5.0);
        assert!(e.le(&x).unwrap());
    }
}
