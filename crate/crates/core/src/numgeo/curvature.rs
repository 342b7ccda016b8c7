use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::chart::{format_point, EmbeddedChart, Scratch};
use super::{NumericsError, CIRCLE_POINTS, DEFAULT_STEP, STRETCH_LIMIT};

/// Pointwise geometry of the induced metric.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub point: Vec<Complex64>,
    pub metric: DMatrix<Complex64>,
    pub ricci: DMatrix<Complex64>,
    pub scalar: f64,
    pub sigma_sq: f64,
    pub volume_weight: f64,
}

/// Induced Fubini–Study metric `g_{ij̄}` at `w`.
pub fn pullback_metric(
    chart: &EmbeddedChart,
    w: &[Complex64],
) -> Result<DMatrix<Complex64>, NumericsError> {
    check_point(chart, w)?;
    let mut s = Scratch::new(chart);
    if chart.frame_into(w, &mut s).is_none() {
        return Err(rank_failure(w));
    }
    Ok(chart.metric_matrix(w, &mut s))
}

/// `log det g_{ij̄}` at `w`.
pub fn log_det_metric(chart: &EmbeddedChart, w: &[Complex64]) -> Result<f64, NumericsError> {
    check_point(chart, w)?;
    let mut s = Scratch::new(chart);
    chart.log_det_into(w, &mut s).ok_or_else(|| rank_failure(w))
}

/// Ricci form, scalar curvature and `|σ|²` at `w`.
///
/// `step` is measured in the metric: the stencil moves along a
/// `g`-orthonormal frame, so the same value suits every point of the chart.
pub fn scalar_curvature(
    chart: &EmbeddedChart,
    w: &[Complex64],
    step: f64,
) -> Result<CurvatureSample, NumericsError> {
    check_point(chart, w)?;
    check_step(step)?;
    let n = chart.n();
    let mut s = Scratch::new(chart);
    let f0 = chart.frame_into(w, &mut s).ok_or_else(|| rank_failure(w))?;
    let metric = chart.metric_matrix(w, &mut s);
    let l = lower_factor(chart, &s);
    let frame = frame_from(&l);
    let center = chol_diagonal(chart, &s);

    let mut hf = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let d = circle_mean(chart, w, frame.column(k).as_slice(), step, &center, &mut s)?;
        hf[(k, k)] = Complex64::new(d, 0.0);
    }
    let i = Complex64::new(0.0, 1.0);
    for k in 0..n {
        for m in k + 1..n {
            let avg = 0.5 * (hf[(k, k)].re + hf[(m, m)].re);
            let v1: Vec<Complex64> = (0..n)
                .map(|r| (frame[(r, k)] + frame[(r, m)]) * FRAC_1_SQRT_2)
                .collect();
            let v2: Vec<Complex64> = (0..n)
                .map(|r| (frame[(r, k)] + i * frame[(r, m)]) * FRAC_1_SQRT_2)
                .collect();
            let q1 = circle_mean(chart, w, &v1, step, &center, &mut s)?;
            let q2 = circle_mean(chart, w, &v2, step, &center, &mut s)?;
            let h = Complex64::new(q1 - avg, q2 - avg);
            hf[(k, m)] = h;
            hf[(m, k)] = h.conj();
        }
    }
    let ricci_frame = -hf;
    let scalar = 2.0 * (0..n).map(|k| ricci_frame[(k, k)].re).sum::<f64>();
    let ricci = &l * &ricci_frame * l.adjoint();
    let sigma_sq = (n * (n + 1)) as f64 - scalar;
    Ok(CurvatureSample {
        point: w.to_vec(),
        metric,
        ricci,
        scalar,
        sigma_sq,
        volume_weight: f0.exp(),
    })
}

/// `|σ|²(w) = n(n+1) − S_g(w)` with the default step.
pub fn sigma_sq_pointwise(chart: &EmbeddedChart, w: &[Complex64]) -> Result<f64, NumericsError> {
    Ok(scalar_curvature(chart, w, DEFAULT_STEP)?.sigma_sq)
}

/// Scalar curvature and `log det g` only; the trace needs just the diagonal
/// of the frame Hessian. Agrees with [`scalar_curvature`] to the last bit.
pub(crate) fn scalar_and_log_det(
    chart: &EmbeddedChart,
    w: &[Complex64],
    step: f64,
    s: &mut Scratch,
) -> Result<(f64, f64), NumericsError> {
    let n = chart.n();
    let f0 = chart.frame_into(w, s).ok_or_else(|| rank_failure(w))?;
    let l = lower_factor(chart, s);
    let frame = frame_from(&l);
    let center = chol_diagonal(chart, s);
    let mut trace = 0.0;
    for k in 0..n {
        trace += -circle_mean(chart, w, frame.column(k).as_slice(), step, &center, s)?;
    }
    Ok((2.0 * trace, f0))
}

/// Lower Cholesky factor of `g` (not `g/κ`) from the scratch buffers.
fn lower_factor(chart: &EmbeddedChart, s: &Scratch) -> DMatrix<Complex64> {
    let n = chart.n();
    let root = chart.kappa().sqrt();
    DMatrix::from_fn(n, n, |i, j| s.chol[i * n + j] * root)
}

/// Columns `u_k` with `u_k^T g ū_l = δ_kl`, i.e. `L^{-T}`.
fn frame_from(l: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = l.nrows();
    let lt = l.transpose();
    let mut u = DMatrix::<Complex64>::identity(n, n);
    // lt is upper triangular: back substitution column by column
    for c in 0..n {
        for r in (0..n).rev() {
            let mut acc = u[(r, c)];
            for k in r + 1..n {
                acc -= lt[(r, k)] * u[(k, c)];
            }
            u[(r, c)] = acc / lt[(r, r)];
        }
    }
    u
}

/// `∂_ζ∂_ζ̄ log det g(w + ζv)` at `ζ = 0` from the mean over a circle of radius `h`.
///
/// `center` holds the Cholesky diagonal of `g/κ` at `w`; differences of
/// `log det g` are taken as sums of logs of diagonal ratios, which keeps the
/// rounding error independent of the size of `log det g` itself.
fn circle_mean(
    chart: &EmbeddedChart,
    w: &[Complex64],
    v: &[Complex64],
    h: f64,
    center: &[f64],
    s: &mut Scratch,
) -> Result<f64, NumericsError> {
    let n = chart.n();
    let h = capped_step(w, v, h);
    let mut sum = 0.0;
    for m in 0..CIRCLE_POINTS {
        let z = Complex64::from_polar(h, 2.0 * PI * m as f64 / CIRCLE_POINTS as f64);
        let mut p = std::mem::take(&mut s.point);
        for ((pi, wi), vi) in p.iter_mut().zip(w).zip(v) {
            *pi = wi + z * vi;
        }
        let ok = chart.frame_into(&p, s).is_some_and(f64::is_finite);
        s.point = p;
        if !ok {
            return Err(NumericsError::StepSize {
                step: h,
                point: format_point(w),
            });
        }
        for (i, c) in center.iter().enumerate() {
            sum += 2.0 * (s.chol[i * n + i].re / c).ln();
        }
    }
    let d = sum / CIRCLE_POINTS as f64 / (h * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(NumericsError::StepSize {
            step: h,
            point: format_point(w),
        })
    }
}

fn chol_diagonal(chart: &EmbeddedChart, s: &Scratch) -> Vec<f64> {
    let n = chart.n();
    (0..n).map(|i| s.chol[i * n + i].re).collect()
}

/// The stencil radius in the metric, scaled down where the frame vector is
/// long compared with `1 + |w|` (far out in a stretched chart, where a circle
/// of metric radius `h` would leave the region in which `log det g` is close
/// to its quadratic approximation). Linear in `h`, so step halving still
/// halves every radius.
fn capped_step(w: &[Complex64], v: &[Complex64], h: f64) -> f64 {
    let scale = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if len > STRETCH_LIMIT * scale {
        h * STRETCH_LIMIT * scale / len
    } else {
        h
    }
}

fn check_point(chart: &EmbeddedChart, w: &[Complex64]) -> Result<(), NumericsError> {
    if w.len() != chart.n() {
        return Err(NumericsError::Usage(format!(
            "point has {} coordinates, chart has dimension {}",
            w.len(),
            chart.n()
        )));
    }
    if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumericsError::Usage("point must be finite".into()));
    }
    Ok(())
}

fn check_step(step: f64) -> Result<(), NumericsError> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        Err(NumericsError::Usage(format!(
            "step must be positive, got {step}"
        )))
    }
}

fn rank_failure(w: &[Complex64]) -> NumericsError {
    NumericsError::ChartRank {
        point: format_point(w),
        detail: "pullback metric is not positive definite".into(),
    }
}

/// Outcome of [`calibrate`].
#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub n: usize,
    pub kappa: f64,
    pub step: f64,
    pub points: usize,
    pub target: f64,
    pub max_deviation: f64,
    pub max_deviation_half_step: f64,
    /// `max_deviation / max_deviation_half_step`; about 4 for a second-order scheme.
    pub convergence_ratio: f64,
    pub mean_scalar: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CalibrationReport {
    pub fn ensure_passed(&self) -> Result<(), NumericsError> {
        if self.passed {
            Ok(())
        } else {
            Err(NumericsError::Calibration {
                n: self.n,
                deviation: self.max_deviation,
                tolerance: self.tolerance,
            })
        }
    }
}

/// Deterministic calibration points: the origin, then points with
/// `|w_j| ≤ 2` drawn from a fixed stream.
pub fn calibration_points(n: usize) -> Vec<Vec<Complex64>> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let mut pts = vec![vec![Complex64::new(0.0, 0.0); n]];
    for k in 1..super::CALIBRATION_POINTS {
        let mut rng = ChaCha8Rng::seed_from_u64(super::CALIBRATION_SEED);
        rng.set_stream(k as u64);
        pts.push(
            (0..n)
                .map(|_| {
                    let r: f64 = 2.0 * rng.random::<f64>();
                    let t: f64 = 2.0 * PI * rng.random::<f64>();
                    Complex64::from_polar(r, t)
                })
                .collect(),
        );
    }
    pts
}

/// Scalar curvature of the linear chart of `P^n` against `n(n+1)` on the
/// calibration points, at `step` and `step/2`.
pub fn calibrate(n: usize, step: f64) -> Result<CalibrationReport, NumericsError> {
    calibrate_with_kappa(n, step, super::KAPPA)
}

pub fn calibrate_with_kappa(
    n: usize,
    step: f64,
    kappa: f64,
) -> Result<CalibrationReport, NumericsError> {
    if n == 0 {
        return Err(NumericsError::Usage("calibration needs n ≥ 1".into()));
    }
    check_step(step)?;
    let pair = crate::catalog::PolarizedPair::projective_space(n as u32, 1)
        .map_err(|e| NumericsError::Usage(e.to_string()))?;
    let chart = super::embed(&pair)?.with_kappa(kappa)?;
    let target = (n * (n + 1)) as f64;
    let pts = calibration_points(n);
    let mut s = Scratch::new(&chart);
    let (mut dev, mut dev_half, mut total) = (0.0f64, 0.0f64, 0.0);
    for w in &pts {
        let (sc, _) = scalar_and_log_det(&chart, w, step, &mut s)?;
        let (sc_half, _) = scalar_and_log_det(&chart, w, step / 2.0, &mut s)?;
        dev = dev.max((sc - target).abs());
        dev_half = dev_half.max((sc_half - target).abs());
        total += sc;
    }
    let tolerance = super::CALIBRATION_TOLERANCE;
    Ok(CalibrationReport {
        n,
        kappa,
        step,
        points: pts.len(),
        target,
        max_deviation: dev,
        max_deviation_half_step: dev_half,
        convergence_ratio: dev / dev_half,
        mean_scalar: total / pts.len() as f64,
        tolerance,
        passed: dev < tolerance,
    })
}
