//! Lattice-discretization greedy maximization of monotone continuous functions over
//! polytopes given by a finite vertex set.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases below fix it.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod objectives;
pub mod oracles;
pub mod scalar;
pub mod seeding;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{BoxConstraint, Point, SimplexForm, StepSet, VPolytope};
pub use objectives::{Decomposable, Objective};
pub use oracles::{BatchSampling, BatchScope, GradientOracle, NoiseMode, ValueOracle};
pub use scalar::Scalar;
pub use solvers::{RhoSchedule, SolverConfig, SolverKind, SolverReport, TrajectoryPoint};

pub type Point64 = Point<f64>;
pub type Point32 = Point<f32>;
pub type VPolytope64 = VPolytope<f64>;
pub type VPolytope32 = VPolytope<f32>;
pub type BoxConstraint64 = BoxConstraint<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolverReport64 = SolverReport<f64>;
pub type NoiseMode64 = NoiseMode<f64>;
