use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::invariants::{core_numbers, invariants, sigma_from, InvariantReport};
use super::pair::{Family, PolarizedPair};
use super::CatalogError;
use crate::chowring::Rational;

/// Closed-form degree per family; used to bound enumerations and as an
/// independent check on the ring evaluator.
pub fn closed_form_degree(pair: &PolarizedPair) -> u128 {
    match pair.family() {
        Family::ProjectiveSpace { n, twist } => (*twist as u128).pow(*n),
        Family::Hypersurface { degree, .. } => *degree as u128,
        Family::CompleteIntersection { degrees, .. } => {
            degrees.iter().map(|&d| d as u128).product()
        }
        Family::Scroll { a } => a.iter().map(|&x| x as u128).sum(),
        Family::Product {
            factors,
            multidegree,
        } => {
            let n: u32 = factors.iter().sum();
            let mut multinomial = factorial(n);
            for &a in factors {
                multinomial /= factorial(a);
            }
            factors
                .iter()
                .zip(multidegree)
                .fold(multinomial, |acc, (&a, &d)| acc * (d as u128).pow(a))
        }
    }
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Nonincreasing sequences of `len` values in `min..=max` with sum at most `budget`.
fn nonincreasing(len: usize, min: u32, max: u32, budget: u64) -> Vec<Vec<u32>> {
    fn rec(
        len: usize,
        min: u32,
        cap: u32,
        budget: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let left = (len - cur.len() - 1) as u64;
        let mut v = min;
        while v <= cap && v as u64 + left * min as u64 <= budget {
            cur.push(v);
            rec(len, min, v, budget - v as u64, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(len, min, max, budget, &mut Vec::new(), &mut out);
    out
}

/// Multisets of `(dim, degree)` factors with dimensions summing to `n`,
/// at least two factors, degrees in `1..=max_degree`, and
/// `prod degree^dim <= budget`.
fn product_factors(n: u32, max_degree: u32, budget: u128) -> Vec<(Vec<u32>, Vec<u32>)> {
    fn rec(
        left: u32,
        cap: (u32, u32),
        max_degree: u32,
        budget: u128,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<(Vec<u32>, Vec<u32>)>,
    ) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.iter().copied().unzip());
            }
            return;
        }
        for dim in (1..=left.min(cap.0)).rev() {
            let max_d = if dim == cap.0 { cap.1 } else { max_degree };
            for d in (1..=max_d).rev() {
                let weight = (d as u128).saturating_pow(dim);
                if weight > budget {
                    continue;
                }
                cur.push((dim, d));
                rec(left - dim, (dim, d), max_degree, budget / weight, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(
        n,
        (n, max_degree),
        max_degree,
        budget,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Nondecreasing degree lists of length `c`, entries in `2..=max`, with
/// product at most `budget`.
fn ci_degrees(c: usize, max: u32, budget: u128) -> Vec<Vec<u32>> {
    fn rec(c: usize, lo: u32, max: u32, budget: u128, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        let mut d = lo;
        while d <= max && (d as u128) <= budget {
            cur.push(d);
            rec(c, d, max, budget / d as u128, cur, out);
            cur.pop();
            d += 1;
        }
    }
    let mut out = Vec::new();
    rec(c, 2, max, budget, &mut Vec::new(), &mut out);
    out
}

fn push_valid(out: &mut Vec<PolarizedPair>, family: Family) {
    out.push(PolarizedPair::new(family).expect("enumerated parameters are valid"));
}

/// All catalog pairs of dimension `n` and degree at most `max_degree`.
///
/// Hypersurfaces appear once as `hypersurface`, complete intersections with
/// two or more equations as `complete_intersection`.
pub fn catalog_pairs(n: u32, max_degree: u64) -> Vec<PolarizedPair> {
    let mut out = Vec::new();
    let d_max = max_degree as u128;
    if n == 0 || max_degree == 0 {
        return out;
    }
    let mut twist = 1u32;
    while (twist as u128).pow(n) <= d_max {
        push_valid(&mut out, Family::ProjectiveSpace { n, twist });
        twist += 1;
    }
    for degree in 2..=max_degree.min(u32::MAX as u64) as u32 {
        push_valid(&mut out, Family::Hypersurface { n, degree });
    }
    let mut c = 2;
    while 1u128 << c <= d_max {
        for degrees in ci_degrees(c, max_degree.min(u32::MAX as u64) as u32, d_max) {
            push_valid(&mut out, Family::CompleteIntersection { n, degrees });
        }
        c += 1;
    }
    for a in nonincreasing(n as usize, 1, max_degree as u32, max_degree) {
        push_valid(&mut out, Family::Scroll { a });
    }
    let max_factor_degree = max_degree.min(u32::MAX as u64) as u32;
    for (factors, multidegree) in product_factors(n, max_factor_degree, d_max) {
        let pair = PolarizedPair::product(&factors, &multidegree).expect("valid");
        if closed_form_degree(&pair) <= d_max {
            out.push(pair);
        }
    }
    out.sort();
    out
}

/// The property-test grid: every family with `1 <= n <= max_n` and every
/// degree-type parameter (twist, hypersurface degree, scroll entry,
/// multidegree entry) at most `max_param`. Complete intersections use up to
/// three equations.
pub fn scan_grid(max_n: u32, max_param: u32) -> Vec<PolarizedPair> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for twist in 1..=max_param {
            push_valid(&mut out, Family::ProjectiveSpace { n, twist });
        }
        for degree in 2..=max_param {
            push_valid(&mut out, Family::Hypersurface { n, degree });
        }
        for c in 2..=3 {
            for degrees in ci_degrees(c, max_param, u128::MAX) {
                push_valid(&mut out, Family::CompleteIntersection { n, degrees });
            }
        }
        for a in nonincreasing(n as usize, 1, max_param, u64::MAX) {
            push_valid(&mut out, Family::Scroll { a });
        }
        for (factors, multidegree) in product_factors(n, max_param, u128::MAX) {
            push_valid(
                &mut out,
                Family::Product {
                    factors,
                    multidegree,
                },
            );
        }
    }
    out.sort();
    out
}

/// Compute reports for many pairs, preserving input order.
pub fn evaluate_all(pairs: &[PolarizedPair]) -> Result<Vec<InvariantReport>, CatalogError> {
    pairs.par_iter().map(invariants).collect()
}

/// Sorted distinct values of `σ̄²` over genus-zero catalog pairs of dimension
/// `n` and degree `<= d_max`, together with `2n` (the genus-one value).
pub fn sigma_spectrum(n: u32, d_max: u64) -> Result<Vec<Rational>, CatalogError> {
    if n == 0 || d_max == 0 {
        return Err(CatalogError::Usage(
            "sigma_spectrum needs n ≥ 1 and d_max ≥ 1".into(),
        ));
    }
    let pairs = catalog_pairs(n, d_max);
    let values: Vec<Option<Rational>> = pairs
        .par_iter()
        .map(|p| {
            let core = core_numbers(p)?;
            Ok((core.sectional_genus == 0 && core.degree as u64 <= d_max)
                .then(|| sigma_from(&core)))
        })
        .collect::<Result<_, CatalogError>>()?;
    let mut set: BTreeSet<Rational> = values.into_iter().flatten().collect();
    set.insert(Rational::from_integer(BigInt::from(2 * n)));
    Ok(set.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub n: u32,
    pub d_max: u64,
    /// No spectrum value lies in the open interval `(n, 2n - 2)`.
    pub holds: bool,
    /// Least spectrum value strictly above `n`.
    pub min_above_n: Rational,
}

/// Check that no catalog `σ̄²` falls strictly between `n` and `2n - 2`.
pub fn second_gap_check(n: u32, d_max: u64) -> Result<GapReport, CatalogError> {
    if n < 3 {
        return Err(CatalogError::Usage(format!(
            "the second gap is only claimed for n ≥ 3 (got n = {n})"
        )));
    }
    if d_max < n as u64 {
        return Err(CatalogError::Usage(format!(
            "d_max must be at least n = {n} to reach S(1, ..., 1) (got {d_max})"
        )));
    }
    let spectrum = sigma_spectrum(n, d_max)?;
    let lo = Rational::from_integer(BigInt::from(n));
    let hi = Rational::from_integer(BigInt::from(2 * n - 2));
    let holds = !spectrum.iter().any(|v| *v > lo && *v < hi);
    let min_above_n = spectrum
        .into_iter()
        .find(|v| *v > lo)
        .expect("2n is always in the spectrum");
    Ok(GapReport {
        n,
        d_max,
        holds,
        min_above_n,
    })
}

/// Family selector for scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyFilter {
    All,
    ProjectiveSpace,
    Hypersurface,
    CompleteIntersection,
    Scroll,
    Product,
}

impl FamilyFilter {
    pub fn matches(&self, pair: &PolarizedPair) -> bool {
        matches!(
            (self, pair.family()),
            (FamilyFilter::All, _)
                | (
                    FamilyFilter::ProjectiveSpace,
                    Family::ProjectiveSpace { .. }
                )
                | (FamilyFilter::Hypersurface, Family::Hypersurface { .. })
                | (
                    FamilyFilter::CompleteIntersection,
                    Family::CompleteIntersection { .. }
                )
                | (FamilyFilter::Scroll, Family::Scroll { .. })
                | (FamilyFilter::Product, Family::Product { .. })
        )
    }
}

impl FromStr for FamilyFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => FamilyFilter::All,
            "projective_space" => FamilyFilter::ProjectiveSpace,
            "hypersurface" => FamilyFilter::Hypersurface,
            "complete_intersection" => FamilyFilter::CompleteIntersection,
            "scroll" | "scrolls" => FamilyFilter::Scroll,
            "product" => FamilyFilter::Product,
            other => return Err(format!("unknown family `{other}`")),
        })
    }
}

impl fmt::Display for FamilyFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyFilter::All => "all",
            FamilyFilter::ProjectiveSpace => "projective_space",
            FamilyFilter::Hypersurface => "hypersurface",
            FamilyFilter::CompleteIntersection => "complete_intersection",
            FamilyFilter::Scroll => "scroll",
            FamilyFilter::Product => "product",
        })
    }
}

/// Catalog pairs of one family (or all), dimension `n`, degree `<= max_degree`,
/// with their reports, in deterministic order.
pub fn scan(
    filter: FamilyFilter,
    n: u32,
    max_degree: u64,
) -> Result<Vec<(PolarizedPair, InvariantReport)>, CatalogError> {
    if n == 0 {
        return Err(CatalogError::Usage("n must be ≥ 1".into()));
    }
    let pairs: Vec<PolarizedPair> = catalog_pairs(n, max_degree)
        .into_iter()
        .filter(|p| filter.matches(p))
        .collect();
    let reports = evaluate_all(&pairs)?;
    Ok(pairs.into_iter().zip(reports).collect())
}
