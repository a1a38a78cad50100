use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{is_orthogonal_step_set, step_set, VPolytope};
use crate::oracles::ValueOracle;
use crate::scalar::Scalar;
use crate::solvers::greedy::Walk;
use crate::solvers::{argmax, SolverConfig, SolverReport};

/// Generalized greedy over an orthogonal step set: each round adds `k` copies of the step
/// whose average gain `[f(x + j e) − f(x)] / j` is largest over all admissible `j`. The
/// budget overflow round is truncated to the remaining copies, and the result is compared
/// against the best single vertex `x̂ = argmax_e f(l e)`.
///
/// The trajectory records every copy, so it has `l + 1` entries; when `x̂` wins it replaces
/// the last entry.
pub fn ldgm_g<T: Scalar>(
    oracle: &mut ValueOracle<'_, T>,
    poly: &VPolytope<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverReport<T>> {
    cfg.validate()?;
    ensure_dim(poly.dim(), oracle.dim())?;
    let steps = step_set(poly, cfg.l)?;
    if !is_orthogonal_step_set(&steps) {
        return Err(Error::NonOrthogonalSteps);
    }
    let l = steps.l;
    let l_t = T::from_usize_lossy(l);

    let vertex_values = steps.steps.iter().map(|e| oracle.evaluate(&e.scaled(l_t))).collect::<Result<Vec<T>>>()?;
    let (hat_idx, hat_value) = argmax(vertex_values).ok_or(Error::EmptyVertexSet)?;

    let mut walk = Walk::start(oracle)?;
    let mut t = 0usize;
    while t < l {
        oracle.next_round();
        let base = oracle.evaluate(&walk.x)?;
        // (average gain, step index, copies)
        let mut best: Option<(T, usize, usize)> = None;
        for (idx, e) in steps.steps.iter().enumerate() {
            let used = walk.x.dot(e) / e.dot(e);
            let room = (l_t - used + T::lit(1e-9)).floor();
            let max_copies = if room >= T::one() { room.to_usize().unwrap_or(0) } else { 0 };
            for j in 1..=max_copies {
                let j_t = T::from_usize_lossy(j);
                let avg = (oracle.evaluate(&walk.x.add_scaled(e, j_t))? - base) / j_t;
                if best.map_or(true, |(g, _, _)| avg > g) {
                    best = Some((avg, idx, j));
                }
            }
        }
        let Some((_, idx, k)) = best else { break };
        let copies = k.min(l - t);
        let e = &steps.steps[idx];
        let origin = walk.x.clone();
        for j in 1..=copies {
            walk.x = origin.add_scaled(e, T::from_usize_lossy(j));
            walk.chosen.push(idx);
            walk.record(oracle)?;
        }
        t += copies;
    }

    let truncated = t < l;
    let final_observed = oracle.evaluate(&walk.x)?;
    if hat_value > final_observed {
        walk.x = steps.steps[hat_idx].scaled(l_t);
        walk.chosen = vec![hat_idx; l];
        let value = oracle.exact_value(&walk.x)?;
        let calls = oracle.call_count();
        let last = walk.trajectory.last_mut().expect("trajectory starts non-empty");
        last.value = value;
        last.calls = calls;
    } else if let Some(last) = walk.trajectory.last_mut() {
        last.calls = oracle.call_count();
    }
    Ok(walk.finish("ldgm-g", oracle, cfg, truncated))
}
