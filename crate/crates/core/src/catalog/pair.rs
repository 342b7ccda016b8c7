use std::fmt;

use super::CatalogError;

/// The families of polarized pairs the engine knows how to evaluate.
///
/// Variant order (then parameter order) is the deterministic sort order used
/// by every scan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `(P^n, O(twist))`.
    ProjectiveSpace { n: u32, twist: u32 },
    /// Smooth hypersurface of the given degree in `P^{n+1}`, with `O(1)`.
    Hypersurface { n: u32, degree: u32 },
    /// Smooth complete intersection of the given degrees in `P^{n+c}`.
    CompleteIntersection { n: u32, degrees: Vec<u32> },
    /// Rational normal scroll `S(a_1, ..., a_n)` with its tautological bundle.
    Scroll { a: Vec<u32> },
    /// `P^{a_1} x ... x P^{a_k}` with `O(d_1, ..., d_k)`.
    Product {
        factors: Vec<u32>,
        multidegree: Vec<u32>,
    },
}

/// A validated catalog member `(M, L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizedPair(Family);

fn invalid(field: impl Into<String>, message: impl Into<String>) -> CatalogError {
    CatalogError::InvalidPair {
        field: field.into(),
        message: message.into(),
    }
}

fn check_positive(field: &str, v: u32) -> Result<(), CatalogError> {
    if v == 0 {
        Err(invalid(field, "must be ≥ 1"))
    } else {
        Ok(())
    }
}

fn check_list(field: &str, values: &[u32], min: u32) -> Result<(), CatalogError> {
    if values.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    for (i, &v) in values.iter().enumerate() {
        if v < min {
            return Err(invalid(format!("{field}[{i}]"), format!("must be ≥ {min}")));
        }
    }
    Ok(())
}

impl PolarizedPair {
    pub fn new(family: Family) -> Result<Self, CatalogError> {
        match &family {
            Family::ProjectiveSpace { n, twist } => {
                check_positive("n", *n)?;
                check_positive("twist", *twist)?;
            }
            Family::Hypersurface { n, degree } => {
                check_positive("n", *n)?;
                if *degree < 2 {
                    return Err(invalid(
                        "degree",
                        "must be ≥ 2 (enter linear subspaces as projective_space)",
                    ));
                }
            }
            Family::CompleteIntersection { n, degrees } => {
                check_positive("n", *n)?;
                check_list("degrees", degrees, 2)?;
            }
            Family::Scroll { a } => check_list("a", a, 1)?,
            Family::Product {
                factors,
                multidegree,
            } => {
                check_list("factors", factors, 1)?;
                if factors.len() < 2 {
                    return Err(invalid(
                        "factors",
                        "must list at least two factors (enter a single factor as projective_space)",
                    ));
                }
                if multidegree.len() != factors.len() {
                    return Err(invalid("multidegree", "must have one entry per factor"));
                }
                check_list("multidegree", multidegree, 1)?;
            }
        }
        Ok(PolarizedPair(family))
    }

    pub fn projective_space(n: u32, twist: u32) -> Result<Self, CatalogError> {
        Self::new(Family::ProjectiveSpace { n, twist })
    }

    pub fn hypersurface(n: u32, degree: u32) -> Result<Self, CatalogError> {
        Self::new(Family::Hypersurface { n, degree })
    }

    pub fn complete_intersection(n: u32, degrees: &[u32]) -> Result<Self, CatalogError> {
        Self::new(Family::CompleteIntersection {
            n,
            degrees: degrees.to_vec(),
        })
    }

    pub fn scroll(a: &[u32]) -> Result<Self, CatalogError> {
        Self::new(Family::Scroll { a: a.to_vec() })
    }

    pub fn product(factors: &[u32], multidegree: &[u32]) -> Result<Self, CatalogError> {
        Self::new(Family::Product {
            factors: factors.to_vec(),
            multidegree: multidegree.to_vec(),
        })
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    /// Complex dimension `n`.
    pub fn dimension(&self) -> u32 {
        match &self.0 {
            Family::ProjectiveSpace { n, .. }
            | Family::Hypersurface { n, .. }
            | Family::CompleteIntersection { n, .. } => *n,
            Family::Scroll { a } => a.len() as u32,
            Family::Product { factors, .. } => factors.iter().sum(),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match &self.0 {
            Family::ProjectiveSpace { .. } => "projective_space",
            Family::Hypersurface { .. } => "hypersurface",
            Family::CompleteIntersection { .. } => "complete_intersection",
            Family::Scroll { .. } => "scroll",
            Family::Product { .. } => "product",
        }
    }

    /// Compact parameter string, e.g. `n=2;twist=2` or `a=1,2,3`.
    pub fn params(&self) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match &self.0 {
            Family::ProjectiveSpace { n, twist } => format!("n={n};twist={twist}"),
            Family::Hypersurface { n, degree } => format!("n={n};degree={degree}"),
            Family::CompleteIntersection { n, degrees } => {
                format!("n={n};degrees={}", join(degrees))
            }
            Family::Scroll { a } => format!("a={}", join(a)),
            Family::Product {
                factors,
                multidegree,
            } => format!(
                "factors={};multidegree={}",
                join(factors),
                join(multidegree)
            ),
        }
    }
}

impl fmt::Display for PolarizedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family_name(), self.params())
    }
}
