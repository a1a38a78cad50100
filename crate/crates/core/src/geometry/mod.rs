//! Points of the non-negative orthant, vertex-described polytopes, their frontiers, and the
//! lattice step sets the greedy solvers walk on.

mod grid;
mod point;
mod polytope;

pub use grid::{grid_points, grid_points_in, GridPoints};
pub(crate) use point::dot;
pub use point::{dominates, Point};
pub use polytope::{
    frontier, frontier_indices, is_orthogonal_step_set, simplex_vertices, step_set, within_box, BoxConstraint,
    SimplexForm, StepSet, VPolytope,
};
