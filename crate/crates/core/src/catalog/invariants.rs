use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::model::ChowModel;
use super::pair::{Family, PolarizedPair};
use super::CatalogError;
use crate::chowring::Rational;

/// Structural class of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Linear,
    Quadric,
    VeroneseSurface,
    RationalNormalScroll,
    GenusOneBoundary,
    Higher,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Linear => "linear",
            Classification::Quadric => "quadric",
            Classification::VeroneseSurface => "veronese_surface",
            Classification::RationalNormalScroll => "rational_normal_scroll",
            Classification::GenusOneBoundary => "genus_one_boundary",
            Classification::Higher => "higher",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position of `|σ|²_{L²}` relative to `2n · Vol(P^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoiZeddaVerdict {
    /// `d + g < 2`; only the linear subspace.
    StrictlyBelow,
    /// `d + g = 2` with `g = 0`; only the quadric.
    Equality,
    Above,
}

impl fmt::Display for LoiZeddaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoiZeddaVerdict::StrictlyBelow => "strictly_below",
            LoiZeddaVerdict::Equality => "equality",
            LoiZeddaVerdict::Above => "above",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: u32,
    pub degree: i64,
    /// `(K_M + (n-1)L) · L^{n-1}`.
    pub canonical_intersection: i64,
    pub sectional_genus: i64,
    pub h0: i64,
    pub delta_genus: i64,
    pub mean_sigma_sq: Rational,
    /// `σ̄² · d(M)`, i.e. `|σ|²_{L²}` in units of `Vol(P^n)`.
    pub l2_ratio: Rational,
    pub minimal_codimension: Option<i64>,
    pub classification: Classification,
    /// Set when `K_M = (1-n)L` holds exactly; only reported for genus one.
    pub del_pezzo: bool,
}

/// Degree, canonical intersection and sectional genus: the part of the
/// report that needs the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CoreNumbers {
    pub n: u32,
    pub degree: i64,
    pub canonical_intersection: i64,
    pub sectional_genus: i64,
}

fn integral(r: Rational, what: &str, pair: &PolarizedPair) -> Result<i64, CatalogError> {
    if !r.is_integer() {
        return Err(CatalogError::Inconsistent(format!(
            "{what} of {pair} is not an integer: {r}"
        )));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| CatalogError::Overflow(format!("{what} of {pair} overflows i64")))
}

pub(crate) fn core_numbers(pair: &PolarizedPair) -> Result<CoreNumbers, CatalogError> {
    let model = ChowModel::build(pair)?;
    core_numbers_from(pair, &model)
}

fn core_numbers_from(pair: &PolarizedPair, model: &ChowModel) -> Result<CoreNumbers, CatalogError> {
    let d = model.degree()?;
    if !d.is_positive() {
        return Err(CatalogError::Inconsistent(format!(
            "degree of {pair} is not positive: {d}"
        )));
    }
    let degree = integral(d, "degree", pair)?;
    let ci = integral(
        model.canonical_intersection()?,
        "canonical intersection",
        pair,
    )?;
    if ci % 2 != 0 {
        return Err(CatalogError::Inconsistent(format!(
            "(K+(n-1)L)·L^(n-1) = {ci} is odd for {pair}"
        )));
    }
    Ok(CoreNumbers {
        n: model.n,
        degree,
        canonical_intersection: ci,
        sectional_genus: ci / 2 + 1,
    })
}

pub fn degree(pair: &PolarizedPair) -> Result<i64, CatalogError> {
    Ok(core_numbers(pair)?.degree)
}

pub fn canonical_intersection(pair: &PolarizedPair) -> Result<i64, CatalogError> {
    Ok(core_numbers(pair)?.canonical_intersection)
}

pub fn sectional_genus(pair: &PolarizedPair) -> Result<i64, CatalogError> {
    Ok(core_numbers(pair)?.sectional_genus)
}

/// `dim H^0(M, L)` from the standard closed forms per family.
pub fn h0(pair: &PolarizedPair) -> Result<i64, CatalogError> {
    let big = |v: u32| BigInt::from(v);
    let value: BigInt = match pair.family() {
        Family::ProjectiveSpace { n, twist } => binomial(big(n + twist), big(*n)),
        Family::Product {
            factors,
            multidegree,
        } => factors
            .iter()
            .zip(multidegree)
            .map(|(&a, &d)| binomial(big(a + d), big(a)))
            .product(),
        Family::Scroll { a } => a.iter().map(|&x| BigInt::from(x) + 1).sum(),
        Family::Hypersurface { n, .. } => big(n + 2),
        Family::CompleteIntersection { n, degrees } => big(n + degrees.len() as u32 + 1),
    };
    value
        .to_i64()
        .ok_or_else(|| CatalogError::Overflow(format!("h0 of {pair} overflows i64")))
}

fn delta_from(core: &CoreNumbers, h0: i64) -> i64 {
    core.n as i64 + core.degree - h0
}

pub fn delta_genus(pair: &PolarizedPair) -> Result<i64, CatalogError> {
    Ok(delta_from(&core_numbers(pair)?, h0(pair)?))
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub(crate) fn sigma_from(core: &CoreNumbers) -> Rational {
    let two_n = int(2 * core.n as i64);
    two_n
        * Rational::new(
            BigInt::from(core.degree + core.sectional_genus - 1),
            BigInt::from(core.degree),
        )
}

/// `σ̄² = 2n [1 + (g - 1)/d]`.
pub fn mean_sigma_sq(pair: &PolarizedPair) -> Result<Rational, CatalogError> {
    Ok(sigma_from(&core_numbers(pair)?))
}

pub fn l2_ratio(pair: &PolarizedPair) -> Result<Rational, CatalogError> {
    let core = core_numbers(pair)?;
    Ok(sigma_from(&core) * int(core.degree))
}

fn loi_zedda_from(core: &CoreNumbers) -> LoiZeddaVerdict {
    let s = core.degree + core.sectional_genus;
    if s < 2 {
        LoiZeddaVerdict::StrictlyBelow
    } else if s == 2 && core.sectional_genus == 0 {
        LoiZeddaVerdict::Equality
    } else {
        LoiZeddaVerdict::Above
    }
}

pub fn loi_zedda_classify(pair: &PolarizedPair) -> Result<LoiZeddaVerdict, CatalogError> {
    let core = core_numbers(pair)?;
    let verdict = loi_zedda_from(&core);
    let l2 = sigma_from(&core) * int(core.degree);
    let below = l2 < int(2 * core.n as i64);
    if below != (verdict == LoiZeddaVerdict::StrictlyBelow) {
        return Err(CatalogError::Inconsistent(format!(
            "gate verdict {verdict} disagrees with |σ|²_L2 ratio {l2} for {pair}"
        )));
    }
    Ok(verdict)
}

/// `h0 - n - 1` when `Δ = 0`; `None` otherwise.
pub fn minimal_codimension(pair: &PolarizedPair) -> Result<Option<i64>, CatalogError> {
    let core = core_numbers(pair)?;
    let h0 = h0(pair)?;
    Ok(codim_from(&core, h0))
}

fn codim_from(core: &CoreNumbers, h0: i64) -> Option<i64> {
    (delta_from(core, h0) == 0).then(|| h0 - core.n as i64 - 1)
}

/// Match a genus-zero pair to one of the four Δ-genus-zero families.
fn genus_zero_tag(pair: &PolarizedPair) -> Option<Classification> {
    use Classification::*;
    match pair.family() {
        Family::ProjectiveSpace { twist: 1, .. } => Some(Linear),
        Family::ProjectiveSpace { n: 2, twist: 2 } => Some(VeroneseSurface),
        // rational normal curve S(d)
        Family::ProjectiveSpace { n: 1, .. } => Some(RationalNormalScroll),
        Family::Hypersurface { degree: 2, .. } => Some(Quadric),
        Family::CompleteIntersection { degrees, .. } if degrees == &[2] => Some(Quadric),
        Family::Scroll { .. } => Some(RationalNormalScroll),
        // P^m x P^1 with O(1, d) is S(d, ..., d)
        Family::Product {
            factors,
            multidegree,
        } if factors.len() == 2
            && ((factors[1] == 1 && multidegree[0] == 1)
                || (factors[0] == 1 && multidegree[1] == 1)) =>
        {
            Some(RationalNormalScroll)
        }
        _ => None,
    }
}

fn classify_from(
    pair: &PolarizedPair,
    core: &CoreNumbers,
    delta: i64,
) -> Result<Classification, CatalogError> {
    match core.sectional_genus {
        0 => {
            if delta != 0 {
                return Err(CatalogError::Inconsistent(format!(
                    "{pair} has sectional genus 0 but Δ = {delta}"
                )));
            }
            genus_zero_tag(pair).ok_or_else(|| {
                CatalogError::Inconsistent(format!(
                    "{pair} has Δ = 0 but matches none of the minimal-degree families"
                ))
            })
        }
        1 => Ok(Classification::GenusOneBoundary),
        g if g < 0 => Err(CatalogError::Inconsistent(format!(
            "{pair} has negative sectional genus {g}"
        ))),
        _ => Ok(Classification::Higher),
    }
}

pub fn classify(pair: &PolarizedPair) -> Result<Classification, CatalogError> {
    let core = core_numbers(pair)?;
    classify_from(pair, &core, delta_from(&core, h0(pair)?))
}

pub fn is_del_pezzo(pair: &PolarizedPair) -> Result<bool, CatalogError> {
    ChowModel::build(pair)?.is_del_pezzo()
}

/// Every invariant of a pair, computed from a single ring model.
pub fn invariants(pair: &PolarizedPair) -> Result<InvariantReport, CatalogError> {
    let model = ChowModel::build(pair)?;
    let core = core_numbers_from(pair, &model)?;
    let h0 = h0(pair)?;
    let delta = delta_from(&core, h0);
    let classification = classify_from(pair, &core, delta)?;
    let sigma = sigma_from(&core);
    Ok(InvariantReport {
        n: core.n,
        degree: core.degree,
        canonical_intersection: core.canonical_intersection,
        sectional_genus: core.sectional_genus,
        h0,
        delta_genus: delta,
        l2_ratio: &sigma * int(core.degree),
        mean_sigma_sq: sigma,
        minimal_codimension: codim_from(&core, h0),
        del_pezzo: classification == Classification::GenusOneBoundary && model.is_del_pezzo()?,
        classification,
    })
}
