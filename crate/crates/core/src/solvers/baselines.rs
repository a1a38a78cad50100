use std::cmp::Ordering;

use crate::error::{ensure_dim, Result};
use crate::geometry::{grid_points, BoxConstraint, Point, VPolytope};
use crate::objectives::Objective;
use crate::oracles::ValueOracle;
use crate::scalar::Scalar;
use crate::solvers::{argmax, SolverConfig, SolverReport, TrajectoryPoint};

/// Evaluates every vertex of `E` and keeps the best (lowest index on ties).
pub fn best_vertex<T: Scalar>(oracle: &mut ValueOracle<'_, T>, poly: &VPolytope<T>) -> Result<SolverReport<T>> {
    ensure_dim(poly.dim(), oracle.dim())?;
    let origin = Point::zeros(poly.dim());
    let start = TrajectoryPoint { iteration: 0, value: oracle.exact_value(&origin)?, calls: oracle.call_count() };
    let values = poly.vertices().iter().map(|v| oracle.evaluate(v)).collect::<Result<Vec<T>>>()?;
    let (idx, _) = argmax(values).unwrap_or((0, T::zero()));
    let x = poly.vertices()[idx].clone();
    let end = TrajectoryPoint { iteration: 1, value: oracle.exact_value(&x)?, calls: oracle.call_count() };
    Ok(SolverReport {
        solver: "best-vertex".to_string(),
        trajectory: vec![start, end],
        final_point: x,
        chosen_steps: vec![idx],
        seed: oracle.seed(),
        config: SolverConfig::new(1),
        truncated: false,
    })
}

fn lex_cmp<T: Scalar>(a: &Point<T>, b: &Point<T>) -> Ordering {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Exhaustive maximum of the exact objective over the lattice of `grid_points`.
/// Ties go to the lexicographically smallest point.
pub fn grid_optimum<T, O>(f: &O, poly: &VPolytope<T>, resolution: T, bounds: &BoxConstraint<T>) -> Result<(Point<T>, T)>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    ensure_dim(poly.dim(), f.dim())?;
    let mut best: Option<(Point<T>, T)> = None;
    for x in grid_points(poly, resolution, bounds)? {
        let v = f.value(&x)?;
        let better = match &best {
            None => true,
            Some((bx, bv)) => v > *bv || (v == *bv && lex_cmp(&x, bx) == Ordering::Less),
        };
        if better {
            best = Some((x, v));
        }
    }
    Ok(best.expect("the origin is always a grid point"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::simplex_vertices;
    use crate::objectives::{BipartiteInstance, FnObjective, Modular};

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn best_vertex_examples() {
        let f = Modular::new(vec![1.0, 3.0]).unwrap();
        let poly = VPolytope::new(vec![p(&[2.0, 0.0]), p(&[0.0, 1.0]), p(&[1.0, 0.5])]).unwrap();
        let r = best_vertex(&mut ValueOracle::exact(&f), &poly).unwrap();
        assert_eq!(r.chosen_steps, vec![1]);
        assert_eq!(r.final_value(), 3.0);

        let single = VPolytope::new(vec![p(&[0.4, 0.4])]).unwrap();
        let r = best_vertex(&mut ValueOracle::exact(&f), &single).unwrap();
        assert_eq!(r.final_point, p(&[0.4, 0.4]));

        let budget = BipartiteInstance::new(2, 1, vec![(0, 0), (1, 0)], vec![0.5, 0.5]).unwrap();
        let poly = simplex_vertices(&p(&[1.0, 1.0]), 2.0).unwrap();
        let r = best_vertex(&mut ValueOracle::exact(&budget), &poly).unwrap();
        assert_eq!(r.final_point, p(&[2.0, 0.0]));
        assert_eq!(r.final_value(), 0.75);
    }

    #[test]
    fn grid_optimum_examples() {
        let f = Modular::new(vec![1.0, 2.0]).unwrap();
        let poly = simplex_vertices(&p(&[1.0, 1.0]), 1.0).unwrap();
        let (x, v) = grid_optimum(&f, &poly, 0.5, &BoxConstraint::none()).unwrap();
        assert_eq!((x, v), (p(&[0.0, 1.0]), 2.0));

        let zero = FnObjective::new("zero", 2, |_: &[f64]| 0.0);
        let (x, _) = grid_optimum(&zero, &poly, 0.5, &BoxConstraint::none()).unwrap();
        assert!(x.is_origin());

        let flat = FnObjective::new("sum", 2, |x: &[f64]| x[0] + x[1]);
        let (x, v) = grid_optimum(&flat, &poly, 0.5, &BoxConstraint::none()).unwrap();
        assert_eq!((x, v), (p(&[0.0, 1.0]), 1.0));
    }
}
