use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{simplex_vertices, step_set, within_box, BoxConstraint, Point, SimplexForm, StepSet, VPolytope};
use crate::oracles::ValueOracle;
use crate::scalar::Scalar;
use crate::solvers::{argmax, SolverConfig, SolverReport, TrajectoryPoint};

pub(crate) struct Walk<T> {
    pub x: Point<T>,
    pub trajectory: Vec<TrajectoryPoint<T>>,
    pub chosen: Vec<usize>,
}

impl<T: Scalar> Walk<T> {
    pub fn start(oracle: &ValueOracle<'_, T>) -> Result<Self> {
        let x = Point::zeros(oracle.dim());
        let value = oracle.exact_value(&x)?;
        Ok(Self {
            x,
            trajectory: vec![TrajectoryPoint { iteration: 0, value, calls: oracle.call_count() }],
            chosen: Vec::new(),
        })
    }

    pub fn record(&mut self, oracle: &ValueOracle<'_, T>) -> Result<()> {
        let value = oracle.exact_value(&self.x)?;
        self.trajectory.push(TrajectoryPoint { iteration: self.trajectory.len(), value, calls: oracle.call_count() });
        Ok(())
    }

    pub fn finish(
        self,
        name: &str,
        oracle: &ValueOracle<'_, T>,
        cfg: &SolverConfig<T>,
        truncated: bool,
    ) -> SolverReport<T> {
        SolverReport {
            solver: name.to_string(),
            trajectory: self.trajectory,
            final_point: self.x,
            chosen_steps: self.chosen,
            seed: oracle.seed(),
            config: cfg.clone(),
            truncated,
        }
    }
}

fn prepare<T: Scalar>(oracle: &ValueOracle<'_, T>, poly: &VPolytope<T>, cfg: &SolverConfig<T>) -> Result<StepSet<T>> {
    cfg.validate()?;
    ensure_dim(poly.dim(), oracle.dim())?;
    step_set(poly, cfg.l)
}

// Plain greedy over the step set, optionally skipping candidates that leave a box.
// Issues one base call plus one call per admissible candidate at each step.
fn greedy_walk<T: Scalar>(
    oracle: &mut ValueOracle<'_, T>,
    steps: &StepSet<T>,
    cfg: &SolverConfig<T>,
    bounds: Option<&BoxConstraint<T>>,
    name: &str,
) -> Result<SolverReport<T>> {
    let mut walk = Walk::start(oracle)?;
    let mut truncated = false;
    for _ in 0..steps.l {
        oracle.next_round();
        let base = oracle.evaluate(&walk.x)?;
        let mut best: Option<(usize, T, Point<T>)> = None;
        for (j, e) in steps.steps.iter().enumerate() {
            let candidate = walk.x.add(e);
            if let Some(b) = bounds {
                if !within_box(&candidate, b)? {
                    continue;
                }
            }
            let gain = oracle.evaluate(&candidate)? - base;
            if best.as_ref().map_or(true, |(_, g, _)| gain > *g) {
                best = Some((j, gain, candidate));
            }
        }
        let Some((j, _, next)) = best else {
            truncated = true;
            break;
        };
        walk.x = next;
        walk.chosen.push(j);
        walk.record(oracle)?;
    }
    Ok(walk.finish(name, oracle, cfg, truncated))
}

/// Lattice-discretization greedy: from the origin, add the frontier step `e = v / l` with
/// the largest marginal gain, `l` times. Costs `l · (m + 1)` oracle calls.
pub fn ldgm<T: Scalar>(
    oracle: &mut ValueOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverReport<T>> {
    let steps = prepare(oracle, poly, cfg)?;
    greedy_walk(oracle, &steps, cfg, None, "ldgm")
}

/// Greedy on `{a^T x <= b, x >= 0} ∩ {x <= c}`: steps come from the simplex alone, and only
/// those keeping the iterate inside the box compete. Stops early (flagging truncation) when
/// no step fits.
pub fn ldgm_box<T: Scalar>(
    oracle: &mut ValueOracle<'_, T>,
    a: &Point<T>,
    b: T,
    c: &BoxConstraint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverReport<T>> {
    let upper = c.bound().ok_or_else(|| Error::param("ldgm-box needs an upper box"))?;
    ensure_dim(a.dim(), upper.dim())?;
    SimplexForm::new(a.clone(), b)?;
    let poly = simplex_vertices(a, b)?;
    let steps = prepare(oracle, &poly, cfg)?;
    greedy_walk(oracle, &steps, cfg, Some(c), "ldgm-box")
}

/// Greedy with look-ahead `γ` and exponentially averaged marginal estimates:
/// `d_t(e) = (1 − ρ_t) d_{t−1}(e) + ρ_t [f̃(x_t + γe) − f̃(x_t)]`, then `x_{t+1} = x_t + e*`.
///
/// The base value `f̃(x_t)` is drawn once per iteration and shared by every candidate.
pub fn generalized_ldgm<T: Scalar>(
    oracle: &mut ValueOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverReport<T>> {
    let steps = prepare(oracle, poly, cfg)?;
    let gamma = T::from_usize_lossy(cfg.gamma);
    let mut surrogate = vec![T::zero(); steps.len()];
    let mut walk = Walk::start(oracle)?;
    for t in 0..steps.l {
        let rho: T = cfg.rho.value(t);
        oracle.next_round();
        let base = oracle.evaluate(&walk.x)?;
        for (d, e) in surrogate.iter_mut().zip(&steps.steps) {
            let delta = oracle.evaluate(&walk.x.add_scaled(e, gamma))? - base;
            *d = (T::one() - rho) * *d + rho * delta;
        }
        let (j, _) = argmax(surrogate.iter().copied())
            .ok_or_else(|| Error::param("no comparable candidate step (all surrogates NaN)"))?;
        walk.x = walk.x.add(&steps.steps[j]);
        walk.chosen.push(j);
        walk.record(oracle)?;
    }
    Ok(walk.finish("generalized-ldgm", oracle, cfg, false))
}
