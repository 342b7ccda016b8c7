use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::{Polynomial, Powers};
use super::{NumericsError, KAPPA};
use crate::catalog::{Family, PolarizedPair};

/// Affine chart of an embedded manifold: `w ↦ [φ_0(w) : … : φ_N(w)]`.
#[derive(Clone, Debug)]
pub struct EmbeddedChart {
    n: usize,
    coordinates: Vec<Polynomial>,
    kappa: f64,
    provenance: String,
    max_exponents: Vec<u32>,
    fiber_scaling: Option<Vec<i32>>,
}

impl EmbeddedChart {
    /// Wraps explicit coordinate functions. Fails unless the differential
    /// has rank `n` at the origin.
    pub fn new(
        n: usize,
        coordinates: Vec<Polynomial>,
        kappa: f64,
        provenance: impl Into<String>,
    ) -> Result<Self, NumericsError> {
        if n == 0 {
            return Err(NumericsError::Usage("chart dimension must be ≥ 1".into()));
        }
        if coordinates.len() < 2 || coordinates.iter().any(|p| p.nvars() != n) {
            return Err(NumericsError::Usage(format!(
                "need at least two coordinate functions in {n} variables"
            )));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(NumericsError::Usage(format!(
                "normalization must be positive, got {kappa}"
            )));
        }
        let mut max_exponents = vec![0; n];
        for p in &coordinates {
            for (a, b) in max_exponents.iter_mut().zip(p.max_exponents()) {
                *a = (*a).max(b);
            }
        }
        let chart = EmbeddedChart {
            n,
            coordinates,
            kappa,
            provenance: provenance.into(),
            max_exponents,
            fiber_scaling: None,
        };
        let origin = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = Scratch::new(&chart);
        let ok = chart.frame_into(&origin, &mut scratch).is_some();
        if !ok {
            return Err(NumericsError::ChartRank {
                point: format_point(&origin),
                detail: "pullback metric is not positive definite".into(),
            });
        }
        Ok(chart)
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient projective dimension `N` (one less than the number of coordinates).
    pub fn ambient_dimension(&self) -> usize {
        self.coordinates.len() - 1
    }

    pub fn coordinates(&self) -> &[Polynomial] {
        &self.coordinates
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Declares that the chart is fibred over variable 0 and that variable
    /// `j` stays of size about `(1 + |w_0|²)^{-e_j/2}` on the bulk of the
    /// manifold. The Monte Carlo proposal uses this to reach the fibre over
    /// `w_0 = ∞`. `e_0` is ignored.
    pub fn with_fiber_scaling(mut self, exponents: Vec<i32>) -> Result<Self, NumericsError> {
        if exponents.len() != self.n {
            return Err(NumericsError::Usage(format!(
                "need {} fibre exponents",
                self.n
            )));
        }
        self.fiber_scaling = exponents[1..].iter().any(|&e| e != 0).then_some(exponents);
        Ok(self)
    }

    pub fn fiber_scaling(&self) -> Option<&[i32]> {
        self.fiber_scaling.as_deref()
    }

    fn keeping_hints(mut self, from: &Self) -> Self {
        self.fiber_scaling = from.fiber_scaling.clone();
        self
    }

    /// Same coordinates, different metric normalization.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self, NumericsError> {
        Self::new(
            self.n,
            self.coordinates.clone(),
            kappa,
            self.provenance.clone(),
        )
        .map(|c| c.keeping_hints(self))
    }

    /// Coordinates mixed by an `(N+1)×(N+1)` matrix: `φ'_α = Σ_β m_{αβ} φ_β`.
    pub fn transformed(&self, m: &DMatrix<Complex64>) -> Result<Self, NumericsError> {
        let k = self.coordinates.len();
        if m.nrows() != k || m.ncols() != k {
            return Err(NumericsError::Usage(format!("transform must be {k}×{k}")));
        }
        let coords = (0..k)
            .map(|a| {
                (0..k).fold(Polynomial::from_terms(self.n, []), |acc, b| {
                    acc.add(&self.coordinates[b].scale(m[(a, b)]))
                })
            })
            .collect();
        Self::new(self.n, coords, self.kappa, self.provenance.clone())
            .map(|c| c.keeping_hints(self))
    }

    /// Every coordinate multiplied by the same polynomial.
    pub fn multiplied_by(&self, factor: &Polynomial) -> Result<Self, NumericsError> {
        let coords = self.coordinates.iter().map(|p| p.mul(factor)).collect();
        Self::new(self.n, coords, self.kappa, self.provenance.clone())
            .map(|c| c.keeping_hints(self))
    }

    /// Kähler potential `K(w) = Σ|φ_α(w)|²`.
    pub fn potential(&self, w: &[Complex64]) -> f64 {
        self.coordinates.iter().map(|p| p.eval(w).norm_sqr()).sum()
    }

    /// Values and gradients of all coordinates at `w`, with the gradient rows
    /// stored after each other.
    fn jet_into(&self, w: &[Complex64], s: &mut Scratch) {
        let powers = Powers::new(w, &self.max_exponents);
        let n = self.n;
        for (a, p) in self.coordinates.iter().enumerate() {
            s.values[a] = p.eval_with(&powers, &mut s.grads[a * n..(a + 1) * n]);
        }
    }

    /// Writes `g/κ` into `s.metric` (row-major, lower triangle and diagonal
    /// filled, upper filled by conjugation) using the pairwise form
    /// `K·A − b b^H = Σ_{α<β} W W^H` with `W_i = φ_α ∂_iφ_β − φ_β ∂_iφ_α`,
    /// which avoids the cancellation of the direct formula far from the origin.
    fn metric_over_kappa_into(&self, w: &[Complex64], s: &mut Scratch) {
        self.jet_into(w, s);
        let n = self.n;
        let k: f64 = s.values.iter().map(|v| v.norm_sqr()).sum();
        let inv = 1.0 / k;
        s.metric
            .iter_mut()
            .for_each(|x| *x = Complex64::new(0.0, 0.0));
        let count = s.values.len();
        for a in 0..count {
            let fa = s.values[a] * inv;
            for b in a + 1..count {
                let fb = s.values[b] * inv;
                for i in 0..n {
                    s.wedge[i] = fa * s.grads[b * n + i] - fb * s.grads[a * n + i];
                }
                for i in 0..n {
                    for j in 0..=i {
                        s.metric[i * n + j] += s.wedge[i] * s.wedge[j].conj();
                    }
                }
            }
        }
        for i in 0..n {
            s.metric[i * n + i].im = 0.0;
            for j in 0..i {
                s.metric[j * n + i] = s.metric[i * n + j].conj();
            }
        }
    }

    /// Cholesky factor of `g` at `w` in `s.chol` (lower, row-major) and
    /// `log det g`. `None` when `g` is not numerically positive definite.
    pub(crate) fn frame_into(&self, w: &[Complex64], s: &mut Scratch) -> Option<f64> {
        self.metric_over_kappa_into(w, s);
        let n = self.n;
        let logdet_over = cholesky(&s.metric, &mut s.chol, n)?;
        Some(logdet_over + n as f64 * self.kappa.ln())
    }

    /// `log det g` at `w`.
    pub(crate) fn log_det_into(&self, w: &[Complex64], s: &mut Scratch) -> Option<f64> {
        self.frame_into(w, s)
    }

    /// Induced metric `g_{ij̄}` at `w` as a full Hermitian matrix.
    pub(crate) fn metric_matrix(&self, w: &[Complex64], s: &mut Scratch) -> DMatrix<Complex64> {
        self.metric_over_kappa_into(w, s);
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| s.metric[i * n + j] * self.kappa)
    }
}

/// Reusable buffers for metric evaluation.
pub(crate) struct Scratch {
    values: Vec<Complex64>,
    grads: Vec<Complex64>,
    wedge: Vec<Complex64>,
    metric: Vec<Complex64>,
    pub(crate) chol: Vec<Complex64>,
    pub(crate) point: Vec<Complex64>,
}

impl Scratch {
    pub fn new(chart: &EmbeddedChart) -> Self {
        let n = chart.n;
        let k = chart.coordinates.len();
        let zero = Complex64::new(0.0, 0.0);
        Scratch {
            values: vec![zero; k],
            grads: vec![zero; k * n],
            wedge: vec![zero; n],
            metric: vec![zero; n * n],
            chol: vec![zero; n * n],
            point: vec![zero; n],
        }
    }
}

/// Lower Cholesky factor of a Hermitian matrix; returns `log det`.
fn cholesky(a: &[Complex64], l: &mut [Complex64], n: usize) -> Option<f64> {
    let zero = Complex64::new(0.0, 0.0);
    l.iter_mut().for_each(|x| *x = zero);
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d.is_finite() && d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = Complex64::new(djj, 0.0);
        logdet += 2.0 * djj.ln();
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(logdet)
}

pub(crate) fn format_point(w: &[Complex64]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
        .collect();
    format!("({})", parts.join(", "))
}

/// All exponent vectors in `nvars` variables with total degree ≤ `d`,
/// ordered by degree and then lexicographically (the constant comes first).
fn exponents_up_to(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(nvars, d, &mut Vec::new(), &mut all);
    all.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
    all
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Explicit chart of the embedding of `pair` by the complete linear system
/// of its polarization (the Kodaira map), for the families that admit one in
/// closed form.
pub fn embed(pair: &PolarizedPair) -> Result<EmbeddedChart, NumericsError> {
    let tag = pair.to_string();
    match pair.family() {
        Family::ProjectiveSpace { n, twist } => {
            let n = *n as usize;
            let coords = exponents_up_to(n, *twist)
                .into_iter()
                .map(|e| Polynomial::monomial(one(), e))
                .collect();
            EmbeddedChart::new(n, coords, KAPPA, tag)
        }
        Family::Product {
            factors,
            multidegree,
        } => {
            let n: usize = factors.iter().map(|&a| a as usize).sum();
            let mut coords = vec![vec![0u32; n]];
            let mut offset = 0;
            for (&a, &d) in factors.iter().zip(multidegree) {
                let block = exponents_up_to(a as usize, d);
                let mut next = Vec::with_capacity(coords.len() * block.len());
                for base in &coords {
                    for e in &block {
                        let mut m = base.clone();
                        m[offset..offset + a as usize].copy_from_slice(e);
                        next.push(m);
                    }
                }
                coords = next;
                offset += a as usize;
            }
            let coords = coords
                .into_iter()
                .map(|e| Polynomial::monomial(one(), e))
                .collect();
            EmbeddedChart::new(n, coords, KAPPA, tag)
        }
        Family::Scroll { a } => {
            // variable 0 is the base coordinate t, variables 1.. are w_2..w_n
            let n = a.len();
            let mut coords = Vec::new();
            for (j, &aj) in a.iter().enumerate() {
                for k in 0..=aj {
                    let mut e = vec![0u32; n];
                    e[0] = k;
                    if j > 0 {
                        e[j] = 1;
                    }
                    coords.push(Polynomial::monomial(one(), e));
                }
            }
            // w_j t^{a_j} is comparable to t^{a_1} near the fibre at infinity
            let scaling = a.iter().map(|&aj| aj as i32 - a[0] as i32).collect();
            EmbeddedChart::new(n, coords, KAPPA, tag)?.with_fiber_scaling(scaling)
        }
        Family::Hypersurface { n, degree: 2 } => quadric_chart(*n as usize, tag),
        Family::CompleteIntersection { n, degrees } if degrees.as_slice() == [2] => {
            quadric_chart(*n as usize, tag)
        }
        _ => Err(NumericsError::Unsupported(tag)),
    }
}

/// Stereographic chart of the Fermat quadric `Σ z_α² = 0` in `P^{n+1}`.
fn quadric_chart(n: usize, tag: String) -> Result<EmbeddedChart, NumericsError> {
    let i = Complex64::new(0.0, 1.0);
    let square = |j: usize| {
        let mut e = vec![0u32; n];
        e[j] = 2;
        (one(), e)
    };
    let s = Polynomial::from_terms(n, (0..n).map(square));
    let c1 = Polynomial::constant(n, one());
    let mut coords = vec![c1.add(&s), s.add(&c1.scale(-one())).scale(i)];
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        coords.push(Polynomial::monomial(-2.0 * i, e));
    }
    EmbeddedChart::new(n, coords, KAPPA, tag)
}
