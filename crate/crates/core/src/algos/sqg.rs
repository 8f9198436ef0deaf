//! Stochastic quasi-gradient descent.

use serde::{Deserialize, Serialize};

use crate::algos::de::NOISE_STREAM;
use crate::error::{BudgetExhausted, Error, Result};
use crate::evaluator::{BudgetedEvaluator, Objective, RunTrace};
use crate::rng::{RandomSource, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SQGConfig {
    /// Random perturbations per gradient estimate.
    #[serde(default = "default_r")]
    pub r: usize,
    /// Perturbation size, as a fraction of the mean bound range.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Initial step length, as a fraction of the mean bound range.
    #[serde(default = "default_step0")]
    pub step0: f64,
    /// Per-iteration step decay factor.
    #[serde(default = "default_decay")]
    pub decay: f64,
    /// Uniform samples drawn to pick the starting point.
    #[serde(default = "default_warm")]
    pub warm_start_samples: usize,
}

fn default_r() -> usize {
    5
}
fn default_delta() -> f64 {
    0.01
}
fn default_step0() -> f64 {
    0.1
}
fn default_decay() -> f64 {
    0.95
}
fn default_warm() -> usize {
    100
}

impl Default for SQGConfig {
    fn default() -> Self {
        Self {
            r: default_r(),
            delta: default_delta(),
            step0: default_step0(),
            decay: default_decay(),
            warm_start_samples: default_warm(),
        }
    }
}

impl SQGConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidConfig("r must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.step0 > 0.0) {
            return Err(Error::InvalidConfig(
                "delta and step0 must be positive".into(),
            ));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "decay = {} outside (0, 1]",
                self.decay
            )));
        }
        if self.warm_start_samples == 0 {
            return Err(Error::InvalidConfig(
                "warm_start_samples must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `ξ(x) = Σ_k ((f(x + Δ z_k) - f(x)) / Δ) z_k` with `z_k` uniform in `[-1, 1]^D`.
///
/// Costs `r + 1` evaluations: `f(x)` once, then one per perturbation.
pub fn sqg_gradient_estimate(
    ev: &mut BudgetedEvaluator<'_>,
    x: &[f64],
    r: usize,
    delta: f64,
    rng: &mut impl RandomSource,
) -> Result<Vec<f64>, BudgetExhausted> {
    let fx = ev.evaluate(x)?;
    sqg_gradient_estimate_at(ev, x, fx, r, delta, rng)
}

/// As [`sqg_gradient_estimate`] with `f(x)` already known; costs `r`
/// evaluations. Perturbed points leaving the box are clamped and the
/// perturbation actually applied is used in the sum.
pub fn sqg_gradient_estimate_at(
    ev: &mut BudgetedEvaluator<'_>,
    x: &[f64],
    fx: f64,
    r: usize,
    delta: f64,
    rng: &mut impl RandomSource,
) -> Result<Vec<f64>, BudgetExhausted> {
    let dim = x.len();
    let mut xi = vec![0.0; dim];
    let mut point = vec![0.0; dim];
    for _ in 0..r {
        let mut z: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        for j in 0..dim {
            point[j] = x[j] + delta * z[j];
        }
        if !ev.space().contains(&point) {
            ev.space().clamp(&mut point);
            for j in 0..dim {
                z[j] = (point[j] - x[j]) / delta;
            }
        }
        let slope = (ev.evaluate(&point)? - fx) / delta;
        for j in 0..dim {
            xi[j] += slope * z[j];
        }
    }
    Ok(xi)
}

/// SQG descent from the best of a uniform warm-start sample.
///
/// Each iteration moves `x ← clamp(x - ρ_t ξ/‖ξ‖)` with
/// `ρ_t = step0 · (mean bound range) · decay^t`. A zero estimate is discarded
/// without advancing `t`.
pub fn run_sqg(
    config: &SQGConfig,
    objective: &dyn Objective,
    t_max: usize,
    seed: u64,
) -> Result<RunTrace> {
    config.validate()?;
    let mut rng = RngStream::new(seed);
    let mut ev = BudgetedEvaluator::new(objective, t_max, rng.derive(NOISE_STREAM));
    let space = objective.space().clone();
    let scale = space.mean_range();

    let mut start: Option<(Vec<f64>, f64)> = None;
    for _ in 0..config.warm_start_samples {
        let x = space.sample_uniform(&mut rng);
        let Ok(y) = ev.evaluate(&x) else {
            return Ok(ev.finish());
        };
        if start.as_ref().is_none_or(|(_, best)| y < *best) {
            start = Some((x, y));
        }
    }
    let Some((mut x, mut fx)) = start else {
        return Ok(ev.finish());
    };

    let delta = config.delta * scale;
    let mut t = 0i32;
    while let Ok(xi) = sqg_gradient_estimate_at(&mut ev, &x, fx, config.r, delta, &mut rng) {
        let len = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(len > 0.0 && len.is_finite()) {
            continue;
        }
        let step = config.step0 * scale * config.decay.powi(t);
        for j in 0..x.len() {
            x[j] -= step * xi[j] / len;
        }
        space.clamp(&mut x);
        match ev.evaluate(&x) {
            Ok(y) => fx = y,
            Err(_) => break,
        }
        t += 1;
    }
    Ok(ev.finish())
}
