//! Oracle wrappers mediating every solver–objective interaction.
//!
//! A [`ValueOracle`] returns exact values, values perturbed by uniform additive noise, or
//! unbiased mini-batch estimates of a sum-decomposable objective. A [`GradientOracle`]
//! returns analytic gradients, forward differences over a value oracle, or mini-batch
//! gradients. Both count calls, and every random draw is a function of `(seed, call index)`,
//! or `(seed, round index)` for round-scoped batches, so two oracles with the same seed
//! replay identically.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::Point;
use crate::objectives::{forward_difference_gradient, Decomposable, Objective};
use crate::scalar::Scalar;
use crate::seeding::mix_seed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BatchSampling {
    #[default]
    WithReplacement,
    WithoutReplacement,
}

/// Which calls share one mini-batch draw.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BatchScope {
    /// A fresh batch for every call.
    #[default]
    PerCall,
    /// One batch per solver round, shared by every value call in that round.
    PerRound,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseMode<T> {
    Exact,
    /// `f(x) + ε`, `ε ~ U[−delta, delta]` drawn fresh per call.
    Additive {
        delta: T,
    },
    /// `(N / B) Σ_{j ∈ S_B} f_j(x)` over a uniformly drawn batch of `B` terms.
    StochasticBatch {
        batch: usize,
        sampling: BatchSampling,
        scope: BatchScope,
    },
}

impl<T: Scalar> NoiseMode<T> {
    pub fn is_exact(&self) -> bool {
        matches!(self, NoiseMode::Exact)
    }
}

const ROUND_STREAM: u64 = 0x0B47_C4;

fn call_rng(seed: u64, call: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(call);
    rng
}

fn decomposition_of<'a, T: Scalar>(base: &'a dyn Objective<T>) -> Result<&'a dyn Decomposable<T>> {
    base.decomposition().ok_or_else(|| Error::NotDecomposable(base.name().to_string()))
}

fn validate_batch<T: Scalar>(base: &dyn Objective<T>, batch: usize, sampling: BatchSampling) -> Result<()> {
    let terms = decomposition_of(base)?.n_terms();
    if batch == 0 {
        return Err(Error::param("batch size must be at least 1"));
    }
    if sampling == BatchSampling::WithoutReplacement && batch > terms {
        return Err(Error::param(format!(
            "batch of {batch} exceeds the {terms} available terms for sampling without replacement"
        )));
    }
    Ok(())
}

fn draw_batch(rng: &mut ChaCha8Rng, terms: usize, batch: usize, sampling: BatchSampling) -> Vec<usize> {
    match sampling {
        BatchSampling::WithReplacement => (0..batch).map(|_| rng.gen_range(0..terms)).collect(),
        BatchSampling::WithoutReplacement => {
            let mut idx = sample(rng, terms, batch).into_vec();
            idx.sort_unstable();
            idx
        }
    }
}

pub struct ValueOracle<'a, T: Scalar> {
    base: &'a dyn Objective<T>,
    mode: NoiseMode<T>,
    seed: u64,
    calls: u64,
    round: u64,
}

impl<'a, T: Scalar> ValueOracle<'a, T> {
    pub fn new(base: &'a dyn Objective<T>, mode: NoiseMode<T>, seed: u64) -> Result<Self> {
        match mode {
            NoiseMode::Exact => {}
            NoiseMode::Additive { delta } => {
                if !(delta >= T::zero()) || !delta.is_finite() {
                    return Err(Error::param("additive noise amplitude must be finite and >= 0"));
                }
            }
            NoiseMode::StochasticBatch { batch, sampling, .. } => validate_batch(base, batch, sampling)?,
        }
        Ok(Self { base, mode, seed, calls: 0, round: 0 })
    }

    pub fn exact(base: &'a dyn Objective<T>) -> Self {
        Self { base, mode: NoiseMode::Exact, seed: 0, calls: 0, round: 0 }
    }

    pub fn base(&self) -> &'a dyn Objective<T> {
        self.base
    }

    pub fn mode(&self) -> NoiseMode<T> {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn call_count(&self) -> u64 {
        self.calls
    }

    /// Starts a new solver round. Only round-scoped batches observe it.
    pub fn next_round(&mut self) {
        self.round += 1;
    }

    /// The noise-free value, for reporting. Not counted as an oracle call.
    pub fn exact_value(&self, x: &Point<T>) -> Result<T> {
        self.base.value(x)
    }

    pub fn evaluate(&mut self, x: &Point<T>) -> Result<T> {
        ensure_dim(self.base.dim(), x.dim())?;
        let call = self.calls;
        self.calls += 1;
        match self.mode {
            NoiseMode::Exact => self.base.value(x),
            NoiseMode::Additive { delta } => {
                let f = self.base.value(x)?;
                if delta.is_zero() {
                    return Ok(f);
                }
                let u: f64 = call_rng(self.seed, call).gen_range(-1.0..=1.0);
                Ok(f + delta * T::lit(u))
            }
            NoiseMode::StochasticBatch { batch, sampling, scope } => {
                let terms = decomposition_of(self.base)?;
                let n = terms.n_terms();
                let mut rng = match scope {
                    BatchScope::PerCall => call_rng(self.seed, call),
                    BatchScope::PerRound => call_rng(mix_seed(&[self.seed, ROUND_STREAM]), self.round),
                };
                let idx = draw_batch(&mut rng, n, batch, sampling);
                let sum: T = idx.iter().map(|&j| terms.term_value(j, x)).sum();
                Ok(sum * (T::from_usize_lossy(n) / T::from_usize_lossy(batch)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GradientStrategy<T> {
    Analytic,
    ForwardDifference { step: T },
    StochasticBatch { batch: usize, sampling: BatchSampling },
}

pub struct GradientOracle<'a, T: Scalar> {
    base: &'a dyn Objective<T>,
    strategy: GradientStrategy<T>,
    values: Option<ValueOracle<'a, T>>,
    seed: u64,
    calls: u64,
}

impl<'a, T: Scalar> GradientOracle<'a, T> {
    pub fn analytic(base: &'a dyn Objective<T>) -> Result<Self> {
        if !base.has_gradient() {
            return Err(Error::GradientUnavailable(base.name().to_string()));
        }
        Ok(Self { base, strategy: GradientStrategy::Analytic, values: None, seed: 0, calls: 0 })
    }

    /// Forward differences over `values`; each gradient costs `n + 1` value calls.
    pub fn forward_difference(values: ValueOracle<'a, T>, step: T) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::param("forward-difference step must be positive"));
        }
        Ok(Self {
            base: values.base(),
            strategy: GradientStrategy::ForwardDifference { step },
            seed: values.seed(),
            values: Some(values),
            calls: 0,
        })
    }

    /// Exact gradient of a freshly drawn mini-batch surrogate: an unbiased estimate of `∇f`.
    pub fn stochastic_batch(
        base: &'a dyn Objective<T>,
        batch: usize,
        sampling: BatchSampling,
        seed: u64,
    ) -> Result<Self> {
        validate_batch(base, batch, sampling)?;
        Ok(Self { base, strategy: GradientStrategy::StochasticBatch { batch, sampling }, values: None, seed, calls: 0 })
    }

    pub fn base(&self) -> &'a dyn Objective<T> {
        self.base
    }

    pub fn strategy(&self) -> GradientStrategy<T> {
        self.strategy
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Value-oracle calls for forward differences, gradient calls otherwise.
    pub fn call_count(&self) -> u64 {
        self.values.as_ref().map_or(self.calls, ValueOracle::call_count)
    }

    pub fn exact_value(&self, x: &Point<T>) -> Result<T> {
        self.base.value(x)
    }

    pub fn gradient(&mut self, x: &Point<T>) -> Result<Vec<T>> {
        ensure_dim(self.base.dim(), x.dim())?;
        let call = self.calls;
        self.calls += 1;
        match self.strategy {
            GradientStrategy::Analytic => self.base.gradient(x),
            GradientStrategy::ForwardDifference { step } => {
                let values = self.values.as_mut().expect("forward difference owns a value oracle");
                values.next_round();
                forward_difference_gradient(|p| values.evaluate(p), x, step)
            }
            GradientStrategy::StochasticBatch { batch, sampling } => {
                let terms = decomposition_of(self.base)?;
                let n = terms.n_terms();
                let idx = draw_batch(&mut call_rng(self.seed, call), n, batch, sampling);
                let mut out = vec![T::zero(); x.dim()];
                for &j in &idx {
                    terms.add_term_gradient(j, x, T::one(), &mut out)?;
                }
                let scale = T::from_usize_lossy(n) / T::from_usize_lossy(batch);
                out.iter_mut().for_each(|g| *g *= scale);
                Ok(out)
            }
        }
    }
}

/// Sample mean and unbiased sample variance of `reps` evaluations at a fixed point.
pub fn measure_noise_stats<T: Scalar>(oracle: &mut ValueOracle<'_, T>, x: &Point<T>, reps: usize) -> Result<(T, T)> {
    if reps < 2 {
        return Err(Error::param("noise statistics need at least two repetitions"));
    }
    // Welford updates keep a constant sample stream at exactly zero variance.
    let mut mean = T::zero();
    let mut m2 = T::zero();
    for k in 1..=reps {
        let s = oracle.evaluate(x)?;
        let delta = s - mean;
        mean += delta / T::from_usize_lossy(k);
        m2 += delta * (s - mean);
    }
    Ok((mean, m2 / T::from_usize_lossy(reps - 1)))
}
