//! Catalog of polarized pairs and their exact invariants.
//!
//! Every intersection number goes through the generic ring evaluator in
//! [`crate::chowring`]; `h^0(M, L)` uses per-family closed forms. On top of
//! the report sit the three gates: the `L²` comparison with `2n · Vol(P^n)`,
//! the structural classification, and the second-gap scan.

mod invariants;
mod model;
mod pair;
mod scan;

use thiserror::Error;

use crate::chowring::ChowError;

pub use invariants::{
    canonical_intersection, classify, degree, delta_genus, h0, invariants, is_del_pezzo, l2_ratio,
    loi_zedda_classify, mean_sigma_sq, minimal_codimension, sectional_genus, Classification,
    InvariantReport, LoiZeddaVerdict,
};
pub use pair::{Family, PolarizedPair};
pub use scan::{
    catalog_pairs, closed_form_degree, evaluate_all, scan, scan_grid, second_gap_check,
    sigma_spectrum, FamilyFilter, GapReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{field} {message}")]
    InvalidPair { field: String, message: String },
    /// An identity that must hold on every catalog pair failed.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Usage(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
}
