use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::chart::{EmbeddedChart, Scratch};
use super::curvature::scalar_and_log_det;
use super::{NumericsError, DEFAULT_STEP};
use crate::catalog::PolarizedPair;

pub const MIN_SAMPLES: usize = 10_000;
pub const DEFAULT_BATCHES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrationResult {
    pub mean_estimate: f64,
    pub standard_error: f64,
    /// Step-size error of the estimate, from re-evaluating every sample at
    /// twice the step (second order, so the difference over 3). The
    /// per-point error is heavy tailed, so a subsample understates it.
    pub discretization_error: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub batches: usize,
    /// Estimate of `Vol(M) / Vol(P^n)`.
    pub volume_ratio_estimate: f64,
    /// Batch-means error, never below the rounding resolution of the sums.
    pub volume_ratio_standard_error: f64,
    pub effective_sample_size: f64,
}

impl IntegrationResult {
    /// Statistical and discretization error combined in quadrature.
    pub fn combined_error(&self) -> f64 {
        self.standard_error.hypot(self.discretization_error)
    }

    /// `(estimate − exact) / combined_error`; infinite when the error is zero
    /// and the estimate is off.
    pub fn z_score(&self, exact: f64) -> f64 {
        let e = self.combined_error();
        let diff = self.mean_estimate - exact;
        if e > 0.0 {
            diff / e
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub batches: usize,
}

impl MonteCarloConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        MonteCarloConfig {
            samples,
            seed,
            step: DEFAULT_STEP,
            batches: DEFAULT_BATCHES,
        }
    }
}

/// Density `1/(π(1+|z|²)²)` of one coordinate, in log form.
fn log_p1(z: Complex64) -> f64 {
    -(PI * (1.0 + z.norm_sqr()).powi(2)).ln()
}

fn draw_p1(rng: &mut ChaCha8Rng) -> Complex64 {
    let u: f64 = rng.random();
    let t: f64 = rng.random();
    Complex64::from_polar((u / (1.0 - u)).sqrt(), 2.0 * PI * t)
}

/// Chart point for sample `index`, from its own stream of the seeded
/// generator. The proposal is an equal mixture of
///
/// * each coordinate independently from `1/(π(1+|w_j|²)²)` (suits product-like charts),
/// * the Fubini–Study measure of `P^n`, `n!/(π^n (1+|w|²)^{n+1})` (suits charts of `P^n`),
/// * for fibred charts, the first measure with variable `j` shrunk by
///   `(1+|w_0|²)^{-e_j/2}` (see [`EmbeddedChart::with_fiber_scaling`]).
pub fn sample_point(seed: u64, index: u64, chart: &EmbeddedChart) -> Vec<Complex64> {
    let n = chart.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let fiber = chart.fiber_scaling();
    let components = if fiber.is_some() { 3.0 } else { 2.0 };
    let pick = (rng.random::<f64>() * components) as usize;
    match (pick, fiber) {
        (1, _) => {
            // |w|²/(1+|w|²) ~ Beta(n, 1); direction uniform on the sphere, drawn
            // as uniform simplex weights for the |w_j|² plus uniform phases
            let t = rng.random::<f64>().powf(1.0 / n as f64);
            let s = t / (1.0 - t);
            let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = e.iter().sum();
            e.iter()
                .map(|ej| {
                    let phase: f64 = rng.random();
                    Complex64::from_polar((s * ej / total).sqrt(), 2.0 * PI * phase)
                })
                .collect()
        }
        (2, Some(e)) => {
            let mut w: Vec<Complex64> = (0..n).map(|_| draw_p1(&mut rng)).collect();
            let base = w[0].norm_sqr().ln_1p();
            for (wj, &ej) in w.iter_mut().zip(e).skip(1) {
                *wj *= (-0.5 * ej as f64 * base).exp();
            }
            w
        }
        _ => (0..n).map(|_| draw_p1(&mut rng)).collect(),
    }
}

/// Volume of `P^n` for the metric `κ ∂∂̄ log(1 + |w|²)` in the chart's
/// Lebesgue measure: `(κπ)^n / n!`.
fn reference_volume(n: usize, kappa: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * kappa * PI / k as f64)
}

/// `−log` of the proposal density at `w`.
fn log_inverse_density(w: &[Complex64], fiber: Option<&[i32]>) -> f64 {
    let n = w.len();
    let product: f64 = w.iter().map(|&z| log_p1(z)).sum();
    let r2: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let fs = log_fact - n as f64 * PI.ln() - (n + 1) as f64 * r2.ln_1p();
    let mut logs = vec![product, fs];
    if let Some(e) = fiber {
        let base = w[0].norm_sqr().ln_1p();
        let scaled: f64 = w
            .iter()
            .zip(e)
            .skip(1)
            .map(|(&z, &ej)| log_p1(z * (0.5 * ej as f64 * base).exp()) + ej as f64 * base)
            .sum();
        logs.push(log_p1(w[0]) + scaled);
    }
    // log of the mean of e^{logs} without overflow
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - hi).exp()).sum();
    -(hi + (sum / logs.len() as f64).ln())
}

struct Draw {
    sigma_sq: f64,
    coarse_sigma_sq: f64,
    weight: f64,
    reference_weight: f64,
}

pub fn mean_sigma_numeric(
    chart: &EmbeddedChart,
    samples: usize,
    seed: u64,
) -> Result<IntegrationResult, NumericsError> {
    mean_sigma_numeric_with(chart, &MonteCarloConfig::new(samples, seed))
}

/// Importance-sampled mean of `|σ|²` with batch-means error, plus the
/// volume ratio against the linear `P^n` at the same points.
pub fn mean_sigma_numeric_with(
    chart: &EmbeddedChart,
    cfg: &MonteCarloConfig,
) -> Result<IntegrationResult, NumericsError> {
    if cfg.samples < MIN_SAMPLES {
        return Err(NumericsError::Usage(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    if cfg.batches < DEFAULT_BATCHES {
        return Err(NumericsError::Usage(format!(
            "need at least {DEFAULT_BATCHES} batches"
        )));
    }
    if !(cfg.step.is_finite() && cfg.step > 0.0) {
        return Err(NumericsError::Usage(format!(
            "step must be positive, got {}",
            cfg.step
        )));
    }
    let n = chart.n();
    let reference = super::embed(
        &PolarizedPair::projective_space(n as u32, 1)
            .map_err(|e| NumericsError::Usage(e.to_string()))?,
    )?
    .with_kappa(chart.kappa())?;

    let draws: Vec<Draw> = (0..cfg.samples)
        .into_par_iter()
        .map_init(
            || (Scratch::new(chart), Scratch::new(&reference)),
            |(s, sr), i| {
                let w = sample_point(cfg.seed, i as u64, chart);
                let (scalar, log_det) = scalar_and_log_det(chart, &w, cfg.step, s)?;
                let (coarse, _) = scalar_and_log_det(chart, &w, 2.0 * cfg.step, s)?;
                let log_q = log_inverse_density(&w, chart.fiber_scaling());
                let ref_log_det = reference
                    .log_det_into(&w, sr)
                    .ok_or_else(|| NumericsError::Usage("reference chart degenerate".into()))?;
                Ok(Draw {
                    sigma_sq: (n * (n + 1)) as f64 - scalar,
                    coarse_sigma_sq: (n * (n + 1)) as f64 - coarse,
                    weight: (log_det + log_q).exp(),
                    reference_weight: (ref_log_det + log_q).exp(),
                })
            },
        )
        .collect::<Result<_, NumericsError>>()?;

    let weights: Vec<f64> = draws.iter().map(|d| d.weight).collect();
    let weighted: Vec<f64> = draws.iter().map(|d| d.weight * d.sigma_sq).collect();
    let refs: Vec<f64> = draws.iter().map(|d| d.reference_weight).collect();
    let squares: Vec<f64> = weights.iter().map(|w| w * w).collect();

    let total_w = pairwise_sum(&weights);
    let total_ws = pairwise_sum(&weighted);
    let total_ref = pairwise_sum(&refs);
    let ess = total_w * total_w / pairwise_sum(&squares);
    if !(ess.is_finite() && ess >= 0.01 * cfg.samples as f64) {
        return Err(NumericsError::WeightDegeneracy {
            effective: ess,
            samples: cfg.samples,
        });
    }

    let mean = total_ws / total_w;
    let bounds = batch_bounds(cfg.samples, cfg.batches);
    let batch_means: Vec<f64> = bounds
        .iter()
        .map(|&(a, b)| pairwise_sum(&weighted[a..b]) / pairwise_sum(&weights[a..b]))
        .collect();

    // Volume ratio: mean weight over the exact volume of P^n, with the P^n
    // weight at the same points as a regression control variate. Either
    // weight alone can be heavy tailed under the product proposal; their
    // combination is not, whenever the two volume forms are comparable.
    let count = cfg.samples as f64;
    let reference_volume = reference_volume(n, chart.kappa());
    let (mean_w, mean_r) = (total_w / count, total_ref / count);
    let cross: Vec<f64> = weights
        .iter()
        .zip(&refs)
        .map(|(a, r)| (a - mean_w) * (r - mean_r))
        .collect();
    let spread: Vec<f64> = refs.iter().map(|r| (r - mean_r) * (r - mean_r)).collect();
    let var_r = pairwise_sum(&spread);
    let beta = if var_r > 0.0 {
        pairwise_sum(&cross) / var_r
    } else {
        0.0
    };
    let controlled = |w: f64, r: f64| (w - beta * (r - reference_volume)) / reference_volume;
    let ratio = controlled(mean_w, mean_r);
    let batch_ratios: Vec<f64> = bounds
        .iter()
        .map(|&(a, b)| {
            let m = (b - a) as f64;
            controlled(
                pairwise_sum(&weights[a..b]) / m,
                pairwise_sum(&refs[a..b]) / m,
            )
        })
        .collect();

    let step_diffs: Vec<f64> = draws
        .iter()
        .map(|d| d.weight * (d.coarse_sigma_sq - d.sigma_sq).abs())
        .collect();
    let disc = pairwise_sum(&step_diffs) / total_w / 3.0;

    Ok(IntegrationResult {
        mean_estimate: mean,
        standard_error: batch_standard_error(&batch_means, mean),
        discretization_error: disc,
        sample_count: cfg.samples,
        seed: cfg.seed,
        batches: cfg.batches,
        volume_ratio_estimate: ratio,
        volume_ratio_standard_error: batch_standard_error(&batch_ratios, ratio)
            .max(rounding_floor(cfg.samples, ratio)),
        effective_sample_size: ess,
    })
}

/// Floating-point resolution of a pairwise sum of `count` terms near
/// `value`. When the control variate cancels all sampling noise (it does for
/// products of projective spaces) the batch spread is pure rounding, far
/// below this.
fn rounding_floor(count: usize, value: f64) -> f64 {
    f64::EPSILON * (count as f64).log2() * value.abs()
}

/// Contiguous batch ranges covering `0..len`.
fn batch_bounds(len: usize, batches: usize) -> Vec<(usize, usize)> {
    (0..batches)
        .map(|b| (b * len / batches, (b + 1) * len / batches))
        .collect()
}

fn batch_standard_error(values: &[f64], center: f64) -> f64 {
    let b = values.len() as f64;
    let sq: Vec<f64> = values.iter().map(|v| (v - center).powi(2)).collect();
    (pairwise_sum(&sq) / (b * (b - 1.0))).sqrt()
}

/// Sum with a fixed pairwise split, so the result depends only on the input order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().fold(0.0, |a, b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
