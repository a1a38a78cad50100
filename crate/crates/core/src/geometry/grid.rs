use crate::error::{ensure_dim, Error, Result};
use crate::geometry::point::Point;
use crate::geometry::polytope::{BoxConstraint, SimplexForm, VPolytope};
use crate::scalar::{Scalar, FEASIBILITY_TOL};

/// Lattice points `resolution * m` (`m` a non-negative integer vector) inside
/// `{a^T x <= b} ∩ box`. The first coordinate varies fastest.
#[derive(Clone, Debug)]
pub struct GridPoints<T> {
    form: SimplexForm<T>,
    upper: Option<Point<T>>,
    resolution: T,
    counts: Vec<usize>,
    done: bool,
}

pub fn grid_points<T: Scalar>(poly: &VPolytope<T>, resolution: T, bounds: &BoxConstraint<T>) -> Result<GridPoints<T>> {
    let form = poly
        .h_form()
        .ok_or_else(|| Error::UnsupportedPolytope("grid enumeration needs a simplex H-description".into()))?;
    grid_points_in(form, resolution, bounds)
}

pub fn grid_points_in<T: Scalar>(
    form: &SimplexForm<T>,
    resolution: T,
    bounds: &BoxConstraint<T>,
) -> Result<GridPoints<T>> {
    if !(resolution > T::zero()) || !resolution.is_finite() {
        return Err(Error::param("grid resolution must be positive"));
    }
    if let Some(c) = bounds.bound() {
        ensure_dim(form.dim(), c.dim())?;
    }
    Ok(GridPoints {
        form: form.clone(),
        upper: bounds.bound().cloned(),
        resolution,
        counts: vec![0; form.dim()],
        done: false,
    })
}

impl<T: Scalar> GridPoints<T> {
    fn point(&self) -> Point<T> {
        Point::from_raw(self.counts.iter().map(|&m| T::from_usize_lossy(m) * self.resolution).collect())
    }

    fn feasible(&self, x: &Point<T>) -> bool {
        let tol = T::lit(FEASIBILITY_TOL);
        self.form.contains(x)
            && self.upper.as_ref().map_or(true, |c| x.coords().iter().zip(c.coords()).all(|(&xi, &ci)| xi <= ci + tol))
    }

    // The feasible set is down-closed, so once bumping coordinate i (with every lower
    // coordinate reset to zero) leaves it, carrying further can only help at a higher index.
    fn advance(&mut self) {
        for i in 0..self.counts.len() {
            self.counts[i] += 1;
            if self.feasible(&self.point()) {
                return;
            }
            self.counts[i] = 0;
        }
        self.done = true;
    }
}

impl<T: Scalar> Iterator for GridPoints<T> {
    type Item = Point<T>;

    fn next(&mut self) -> Option<Point<T>> {
        if self.done {
            return None;
        }
        let current = self.point();
        self.advance();
        Some(current)
    }
}
