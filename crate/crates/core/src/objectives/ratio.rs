//! Sampled upper bounds on the submodularity ratio α and the DR-submodularity ratio β.
//!
//! Both ratios are infima of `[f(x + kχ_i) − f(x)] / [f(y + kχ_i) − f(y)]` over `x <= y`;
//! α additionally requires `x_i = y_i`. A finite sample can only bound the infimum from above.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::Point;
use crate::objectives::Objective;
use crate::scalar::{Scalar, DENOMINATOR_TOL};

/// The sampled tuple attaining the smallest marginal ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioWitness<T> {
    pub x: Point<T>,
    pub y: Point<T>,
    pub increment: T,
    pub coordinate: usize,
    /// Unclamped ratio at this tuple.
    pub ratio: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioEstimate<T> {
    /// Minimum sampled ratio, clamped to `[0, 1]`.
    pub value: T,
    /// Number of tuples with a non-degenerate denominator.
    pub samples_used: usize,
    pub min_witness: RatioWitness<T>,
}

/// `[f(x + kχ_i) − f(x)] / [f(y + kχ_i) − f(y)]`, or `None` when the denominator vanishes.
pub fn marginal_ratio<T, O>(f: &O, x: &Point<T>, y: &Point<T>, i: usize, k: T) -> Result<Option<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    let num = f.value(&x.with_increment(i, k))? - f.value(x)?;
    let den = f.value(&y.with_increment(i, k))? - f.value(y)?;
    if den.abs() < T::lit(DENOMINATOR_TOL) {
        Ok(None)
    } else {
        Ok(Some(num / den))
    }
}

struct Tuple<T> {
    x: Point<T>,
    y: Point<T>,
    coordinate: usize,
    increment: T,
}

const GRID: f64 = (1u64 << 20) as f64;

// Coordinates snap down to multiples of 2^-20 so that sums of sampled values are exact.
fn snap(v: f64) -> f64 {
    (v * GRID).floor() / GRID
}

// Each draw consumes a fixed number of RNG words, so sample streams are prefix-nested.
fn draw<T: Scalar>(rng: &mut ChaCha8Rng, upper: &[f64]) -> (Tuple<T>, Tuple<T>) {
    let n = upper.len();
    let x: Vec<f64> = upper.iter().map(|&b| snap(rng.gen::<f64>() * b)).collect();
    let y: Vec<f64> = x.iter().zip(upper).map(|(&xi, &b)| snap(xi + rng.gen::<f64>() * (b - xi))).collect();
    let i = rng.gen_range(0..n);
    let u = 1.0 - rng.gen::<f64>();

    let mut y_tied = y.clone();
    y_tied[i] = x[i];
    let to_point = |v: &[f64]| Point::from_raw(v.iter().map(|&c| T::lit(c)).collect());
    let tied =
        Tuple { x: to_point(&x), y: to_point(&y_tied), coordinate: i, increment: T::lit(snap(u * (upper[i] - x[i]))) };
    let general =
        Tuple { x: to_point(&x), y: to_point(&y), coordinate: i, increment: T::lit(snap(u * (upper[i] - y[i]))) };
    (tied, general)
}

fn estimate<T, O>(
    f: &O,
    domain_box: &Point<T>,
    n_samples: usize,
    seed: u64,
    include_general: bool,
) -> Result<RatioEstimate<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    if n_samples == 0 {
        return Err(Error::param("ratio estimation needs at least one sample"));
    }
    ensure_dim(f.dim(), domain_box.dim())?;
    if domain_box.coords().iter().any(|&b| b <= T::zero()) {
        return Err(Error::param("ratio estimation box must be positive in every coordinate"));
    }
    let upper: Vec<f64> = domain_box.coords().iter().map(|b| b.to_f64_lossy()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0usize;
    let mut best: Option<RatioWitness<T>> = None;

    for _ in 0..n_samples {
        let (tied, general) = draw::<T>(&mut rng, &upper);
        let candidates = if include_general { vec![tied, general] } else { vec![tied] };
        for t in candidates {
            let Some(ratio) = marginal_ratio(f, &t.x, &t.y, t.coordinate, t.increment)? else {
                continue;
            };
            used += 1;
            if best.as_ref().map_or(true, |w| ratio < w.ratio) {
                best = Some(RatioWitness { x: t.x, y: t.y, increment: t.increment, coordinate: t.coordinate, ratio });
            }
        }
    }

    let witness = best.ok_or(Error::DegenerateObjective)?;
    Ok(RatioEstimate { value: witness.ratio.max(T::zero()).min(T::one()), samples_used: used, min_witness: witness })
}

/// Sampled upper bound on β over `[0, domain_box]`.
///
/// Every tuple drawn for [`estimate_submodularity_ratio`] with the same seed is also
/// evaluated here, so the β bound never exceeds the α bound.
pub fn estimate_dr_ratio<T, O>(f: &O, domain_box: &Point<T>, n_samples: usize, seed: u64) -> Result<RatioEstimate<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    estimate(f, domain_box, n_samples, seed, true)
}

/// Sampled upper bound on α over `[0, domain_box]` (tuples with `x_i = y_i`).
pub fn estimate_submodularity_ratio<T, O>(
    f: &O,
    domain_box: &Point<T>,
    n_samples: usize,
    seed: u64,
) -> Result<RatioEstimate<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    estimate(f, domain_box, n_samples, seed, false)
}
