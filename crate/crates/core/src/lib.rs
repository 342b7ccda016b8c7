//! Invariants engine and curvature verifier for polarized projective manifolds.
//!
//! For a projective manifold `M ⊂ P^{n+r}` with hyperplane bundle `L` and the
//! induced Fubini–Study metric (holomorphic sectional curvature 1), the mean
//! squared length of the second fundamental form is
//!
//! ```text
//! σ̄² = 2n [1 + (g(L) - 1) / d(M)]
//! ```
//!
//! where `d(M) = L^n` and `g(L)` is the sectional genus. This crate evaluates
//! that formula exactly over a catalog of pairs ([`catalog`]) using a small
//! intersection-ring evaluator ([`chowring`]), and recomputes `|σ|²`
//! numerically from explicit embeddings ([`numgeo`]) as an independent check.
//! [`cli`] holds the command-line front end behind the `polrig` binary.

pub mod catalog;
pub mod chowring;
pub mod cli;
pub mod numgeo;

pub use catalog::{Classification, InvariantReport, PolarizedPair};
pub use chowring::Rational;
