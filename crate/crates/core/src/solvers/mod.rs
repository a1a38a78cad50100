//! The lattice-discretization greedy family, gradient baselines, and reference optimizers.
//!
//! Every solver starts at the origin, records the exact objective value of each iterate
//! (noise only affects what the solver itself observes), and breaks argmax ties toward the
//! lowest candidate index.

mod baselines;
mod gradient;
mod greedy;
mod greedy_g;

pub use baselines::{best_vertex, grid_optimum};
pub use gradient::{frank_wolfe, scg};
pub use greedy::{generalized_ldgm, ldgm, ldgm_box};
pub use greedy_g::ldgm_g;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{BoxConstraint, Point};
use crate::scalar::Scalar;

/// Averaging weights `ρ_t` for the surrogate recurrences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RhoSchedule {
    /// `ρ_t = 1`: no averaging.
    Constant,
    /// `ρ_t = 4 / (t + 8)^{2/3}`.
    #[default]
    Power,
}

impl RhoSchedule {
    pub fn value<T: Scalar>(self, t: usize) -> T {
        match self {
            RhoSchedule::Constant => T::one(),
            RhoSchedule::Power => {
                let rho = 4.0 / ((t as f64) + 8.0).powf(2.0 / 3.0);
                T::lit(rho.min(1.0))
            }
        }
    }
}

impl FromStr for RhoSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "1" => Ok(RhoSchedule::Constant),
            "power" => Ok(RhoSchedule::Power),
            other => Err(Error::param(format!("unknown rho schedule `{other}`"))),
        }
    }
}

impl fmt::Display for RhoSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoSchedule::Constant => "constant",
            RhoSchedule::Power => "power",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    /// Number of steps (and iterations).
    pub l: usize,
    /// Look-ahead: candidates are scored at `x + γe` but the solver moves by `e`.
    pub gamma: usize,
    pub rho: RhoSchedule,
    pub box_constraint: BoxConstraint<T>,
    /// Forward-difference step for gradient baselines running on value oracles.
    pub fd_step: Option<T>,
}

impl<T: Scalar> SolverConfig<T> {
    /// `l` steps, no look-ahead, no averaging.
    pub fn new(l: usize) -> Self {
        Self { l, gamma: 1, rho: RhoSchedule::Constant, box_constraint: BoxConstraint::none(), fd_step: None }
    }

    pub fn with_gamma(mut self, gamma: usize) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_rho(mut self, rho: RhoSchedule) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_box(mut self, box_constraint: BoxConstraint<T>) -> Self {
        self.box_constraint = box_constraint;
        self
    }

    pub fn with_fd_step(mut self, step: T) -> Self {
        self.fd_step = Some(step);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::param("step count l must be at least 1"));
        }
        if self.gamma == 0 {
            return Err(Error::param("look-ahead gamma must be at least 1"));
        }
        if self.gamma > 1 && self.l % self.gamma != 0 {
            return Err(Error::param(format!("look-ahead gamma = {} must divide l = {}", self.gamma, self.l)));
        }
        if let Some(a) = self.fd_step {
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::param("forward-difference step must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub iteration: usize,
    /// Exact objective value of the iterate.
    pub value: T,
    /// Oracle calls issued so far.
    pub calls: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverReport<T> {
    pub solver: String,
    /// Starts at `t = 0` with `f(0)`.
    pub trajectory: Vec<TrajectoryPoint<T>>,
    pub final_point: Point<T>,
    /// Step indices (greedy family) or vertex indices (gradient baselines), in order.
    pub chosen_steps: Vec<usize>,
    pub seed: u64,
    pub config: SolverConfig<T>,
    /// Set when a run stopped before `l` steps because no candidate was admissible.
    pub truncated: bool,
}

impl<T: Scalar> SolverReport<T> {
    pub fn final_value(&self) -> T {
        self.trajectory.last().map_or(T::zero(), |p| p.value)
    }

    pub fn total_calls(&self) -> u64 {
        self.trajectory.last().map_or(0, |p| p.calls)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Ldgm,
    LdgmG,
    GeneralizedLdgm,
    LdgmBox,
    FrankWolfe,
    Scg,
    BestVertex,
}

impl SolverKind {
    pub const ALL: [SolverKind; 7] = [
        SolverKind::Ldgm,
        SolverKind::LdgmG,
        SolverKind::GeneralizedLdgm,
        SolverKind::LdgmBox,
        SolverKind::FrankWolfe,
        SolverKind::Scg,
        SolverKind::BestVertex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Ldgm => "ldgm",
            SolverKind::LdgmG => "ldgm-g",
            SolverKind::GeneralizedLdgm => "generalized-ldgm",
            SolverKind::LdgmBox => "ldgm-box",
            SolverKind::FrankWolfe => "fw",
            SolverKind::Scg => "scg",
            SolverKind::BestVertex => "best-vertex",
        }
    }

    pub fn uses_gradients(self) -> bool {
        matches!(self, SolverKind::FrankWolfe | SolverKind::Scg)
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown solver `{s}`")))
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of the largest value; the lowest index wins ties, NaNs never win.
pub(crate) fn argmax<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}
