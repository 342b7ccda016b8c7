//! Numerical check of the curvature identities on explicit embeddings.
//!
//! An [`EmbeddedChart`] is an affine chart `w ∈ C^n` of an embedded manifold
//! given by polynomial coordinates `φ_α(w)`. The induced metric is the
//! pullback of the Fubini–Study metric of holomorphic sectional curvature 1,
//! `g = κ ∂∂̄ log Σ|φ_α|²` with `κ = 2`, evaluated in closed form. Ricci
//! curvature comes from finite differences of `log det g`, and `|σ|²` from
//! the Gauss equation `|σ|² = n(n+1) − S_g`.

mod chart;
mod curvature;
mod montecarlo;
mod poly;

use thiserror::Error;

pub use chart::{embed, EmbeddedChart};
pub use curvature::{
    calibrate, calibrate_with_kappa, calibration_points, log_det_metric, pullback_metric,
    scalar_curvature, sigma_sq_pointwise, CalibrationReport, CurvatureSample,
};
pub use montecarlo::{
    mean_sigma_numeric, mean_sigma_numeric_with, sample_point, IntegrationResult, MonteCarloConfig,
    DEFAULT_BATCHES, MIN_SAMPLES,
};
pub use poly::Polynomial;

/// Metric normalization: `∂∂̄ log K` has holomorphic sectional curvature 2.
pub const KAPPA: f64 = 2.0;
/// Finite-difference step, measured in the induced metric.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Frame vectors longer than this multiple of `1 + |w|` get a proportionally
/// smaller step.
pub const STRETCH_LIMIT: f64 = 100.0;
/// Points on each stencil circle.
pub const CIRCLE_POINTS: usize = 8;
pub const CALIBRATION_POINTS: usize = 25;
pub const CALIBRATION_SEED: u64 = 0x5eed_ca11;
pub const CALIBRATION_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("numerics unsupported for {0}: no explicit chart for this family")]
    Unsupported(String),
    #[error("chart rank failure at {point}: {detail}")]
    ChartRank { point: String, detail: String },
    #[error("finite-difference step {step} produced a non-finite value near {point}; try a smaller step")]
    StepSize { step: f64, point: String },
    #[error("importance weights degenerate: effective sample size {effective:.1} of {samples}; increase the sample count")]
    WeightDegeneracy { effective: f64, samples: usize },
    #[error("calibration failed for n={n}: max deviation {deviation:.3e} exceeds {tolerance:.0e}")]
    Calibration {
        n: usize,
        deviation: f64,
        tolerance: f64,
    },
    #[error("{0}")]
    Usage(String),
}
