use std::collections::BTreeMap;

use num_complex::Complex64;

/// Polynomial in a fixed number of complex variables with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl Polynomial {
    /// Build from terms, merging repeated exponents and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Complex64, Vec<u32>)>,
    ) -> Self {
        let mut merged: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(
                e.len(),
                nvars,
                "exponent vector length must match variable count"
            );
            *merged.entry(e).or_default() += c;
        }
        Polynomial {
            nvars,
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .map(|(e, c)| (c, e))
                .collect(),
        }
    }

    pub fn monomial(coeff: Complex64, exponents: Vec<u32>) -> Self {
        let nvars = exponents.len();
        Self::from_terms(nvars, [(coeff, exponents)])
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::from_terms(nvars, [(c, vec![0; nvars])])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Complex64, Vec<u32>)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for (_, e) in &self.terms {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Self::from_terms(self.nvars, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(a, e)| (a * c, e.clone())),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                out.push((a * b, ea.iter().zip(eb).map(|(x, y)| x + y).collect()));
            }
        }
        Self::from_terms(self.nvars, out)
    }

    pub fn eval(&self, w: &[Complex64]) -> Complex64 {
        let powers = Powers::new(w, &self.max_exponents());
        self.eval_with(&powers, &mut [])
    }

    /// Value at the point whose powers are tabulated in `powers`; writes the
    /// gradient into `grad` when it is non-empty.
    pub(crate) fn eval_with(&self, powers: &Powers, grad: &mut [Complex64]) -> Complex64 {
        let want_grad = !grad.is_empty();
        grad.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
        let mut value = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut v = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    v *= powers.get(i, k);
                }
            }
            value += v;
            if want_grad {
                for (i, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let mut d = c * k as f64;
                    for (j, &kj) in e.iter().enumerate() {
                        let p = if j == i { kj - 1 } else { kj };
                        if p > 0 {
                            d *= powers.get(j, p);
                        }
                    }
                    grad[i] += d;
                }
            }
        }
        value
    }
}

/// `w_i^k` for every variable up to a per-variable maximum exponent.
pub(crate) struct Powers {
    table: Vec<Vec<Complex64>>,
}

impl Powers {
    pub fn new(w: &[Complex64], max_exponents: &[u32]) -> Self {
        let table = w
            .iter()
            .zip(max_exponents)
            .map(|(&x, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                let mut p = Complex64::new(1.0, 0.0);
                row.push(p);
                for _ in 0..m {
                    p *= x;
                    row.push(p);
                }
                row
            })
            .collect();
        Powers { table }
    }

    #[inline]
    fn get(&self, var: usize, k: u32) -> Complex64 {
        self.table[var][k as usize]
    }
}
