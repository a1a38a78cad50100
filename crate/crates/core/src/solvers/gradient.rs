use crate::error::{ensure_dim, Result};
use crate::geometry::dot;
use crate::geometry::{Point, VPolytope};
use crate::oracles::GradientOracle;
use crate::scalar::Scalar;
use crate::solvers::{argmax, RhoSchedule, SolverConfig, SolverReport, TrajectoryPoint};

// Linear maximization over conv(E) is attained at a vertex; scan all of E.
fn best_vertex_for<T: Scalar>(poly: &VPolytope<T>, direction: &[T]) -> usize {
    argmax(poly.vertices().iter().map(|v| dot(v.coords(), direction))).map_or(0, |(i, _)| i)
}

fn conditional_gradient<T: Scalar>(
    grad: &mut GradientOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
    rho: RhoSchedule,
    name: &str,
    seed: u64,
) -> Result<SolverReport<T>> {
    cfg.validate()?;
    ensure_dim(poly.dim(), grad.dim())?;
    let step = T::one() / T::from_usize_lossy(cfg.l);
    let mut x = Point::zeros(poly.dim());
    let mut trajectory = vec![TrajectoryPoint { iteration: 0, value: grad.exact_value(&x)?, calls: grad.call_count() }];
    let mut chosen = Vec::with_capacity(cfg.l);
    let mut surrogate = vec![T::zero(); poly.dim()];
    for t in 0..cfg.l {
        let g = grad.gradient(&x)?;
        let r: T = rho.value(t);
        for (d, gi) in surrogate.iter_mut().zip(g) {
            *d = (T::one() - r) * *d + r * gi;
        }
        let v = best_vertex_for(poly, &surrogate);
        x = x.add_scaled(&poly.vertices()[v], step);
        chosen.push(v);
        trajectory.push(TrajectoryPoint { iteration: t + 1, value: grad.exact_value(&x)?, calls: grad.call_count() });
    }
    Ok(SolverReport {
        solver: name.to_string(),
        trajectory,
        final_point: x,
        chosen_steps: chosen,
        seed,
        config: cfg.clone(),
        truncated: false,
    })
}

/// Frank-Wolfe with constant step `1/l`: `x_{t+1} = x_t + v_t / l`, where
/// `v_t = argmax_{v ∈ E} <v, g_t>` for the oracle's gradient `g_t`.
pub fn frank_wolfe<T: Scalar>(
    grad: &mut GradientOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
    seed: u64,
) -> Result<SolverReport<T>> {
    conditional_gradient(grad, poly, cfg, RhoSchedule::Constant, "fw", seed)
}

/// Stochastic continuous greedy: like Frank-Wolfe, but steering by the averaged gradient
/// `d_t = (1 − ρ_t) d_{t−1} + ρ_t g_t` with `d_{−1} = 0`.
pub fn scg<T: Scalar>(
    grad: &mut GradientOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
    seed: u64,
) -> Result<SolverReport<T>> {
    conditional_gradient(grad, poly, cfg, cfg.rho, "scg", seed)
}
