//! Properties of the exact invariants over the whole test grid, checked
//! against closed forms computed here without the ring evaluator.

use std::sync::OnceLock;

use num_bigint::BigInt;
use polrig::catalog::{
    closed_form_degree, evaluate_all, invariants, loi_zedda_classify, scan_grid, Classification,
    Family, InvariantReport, LoiZeddaVerdict, PolarizedPair,
};
use polrig::Rational;

fn grid() -> &'static [(PolarizedPair, InvariantReport)] {
    static GRID: OnceLock<Vec<(PolarizedPair, InvariantReport)>> = OnceLock::new();
    GRID.get_or_init(|| {
        let pairs = scan_grid(6, 8);
        let reports = evaluate_all(&pairs).expect("grid evaluates");
        pairs.into_iter().zip(reports).collect()
    })
}

fn q(p: i128, d: i128) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

fn factorial(k: u32) -> i128 {
    (1..=k as i128).product()
}

/// `(K + (n-1)L) · L^{n-1}` from the standard formulas for each family.
fn closed_form_canonical(pair: &PolarizedPair) -> i128 {
    let n = pair.dimension() as i128;
    match pair.family() {
        Family::ProjectiveSpace { twist, .. } => {
            let d = *twist as i128;
            ((n - 1) * d - (n + 1)) * d.pow(n as u32 - 1)
        }
        Family::Hypersurface { degree, .. } => {
            let e = *degree as i128;
            (e - 3) * e
        }
        Family::CompleteIntersection { degrees, .. } => {
            let c = degrees.len() as i128;
            let sum: i128 = degrees.iter().map(|&x| x as i128).sum();
            let prod: i128 = degrees.iter().map(|&x| x as i128).product();
            (sum - c - 2) * prod
        }
        Family::Scroll { .. } => -2,
        Family::Product {
            factors,
            multidegree,
        } => {
            // L^{n-1} · h_j = (n-1)! a_j / Π a_i! · Π d_i^{a_i} / d_j
            let denom: i128 = factors.iter().map(|&a| factorial(a)).product();
            let top: i128 = factors
                .iter()
                .zip(multidegree)
                .map(|(&a, &d)| (d as i128).pow(a))
                .product();
            factors
                .iter()
                .zip(multidegree)
                .map(|(&a, &d)| {
                    let (a, d) = (a as i128, d as i128);
                    let coeff = ((n - 1) * d - a - 1) * factorial(n as u32 - 1) * a * (top / d);
                    assert_eq!(coeff % denom, 0);
                    coeff / denom
                })
                .sum()
        }
    }
}

#[test]
fn grid_is_large_and_sorted() {
    let g = grid();
    assert!(g.len() > 1000, "grid has {} pairs", g.len());
    assert!(g.windows(2).all(|w| w[0].0 < w[1].0));
}

#[test]
fn degree_matches_closed_form() {
    for (pair, r) in grid() {
        assert_eq!(r.degree as u128, closed_form_degree(pair), "{pair}");
    }
}

#[test]
fn canonical_intersection_matches_closed_form() {
    for (pair, r) in grid() {
        assert_eq!(
            r.canonical_intersection as i128,
            closed_form_canonical(pair),
            "{pair}"
        );
    }
}

#[test]
fn canonical_intersection_is_even() {
    for (pair, r) in grid() {
        assert_eq!(r.canonical_intersection.rem_euclid(2), 0, "{pair}");
    }
}

#[test]
fn genus_is_nonnegative_and_zero_exactly_at_minimal_degree() {
    for (pair, r) in grid() {
        assert!(r.sectional_genus >= 0, "{pair}");
        assert!(r.delta_genus >= 0, "{pair}");
        assert_eq!(r.sectional_genus == 0, r.delta_genus == 0, "{pair}");
        assert_eq!(
            r.minimal_codimension.is_some(),
            r.delta_genus == 0,
            "{pair}"
        );
        if let Some(c) = r.minimal_codimension {
            assert_eq!(r.degree, c + 1, "{pair}: minimal degree is codimension + 1");
        }
    }
}

#[test]
fn mean_agrees_with_canonical_route() {
    // σ̄² = 2n + n (K + (n-1)L) L^{n-1} / d
    for (pair, r) in grid() {
        let n = r.n as i128;
        let expect = q(2 * n, 1) + q(n * r.canonical_intersection as i128, r.degree as i128);
        assert_eq!(r.mean_sigma_sq, expect, "{pair}");
        assert_eq!(r.l2_ratio, expect * q(r.degree as i128, 1), "{pair}");
    }
}

#[test]
fn scroll_mean_has_closed_form() {
    for (pair, r) in grid() {
        if let Family::Scroll { a } = pair.family() {
            let n = a.len() as i128;
            let s: i128 = a.iter().map(|&x| x as i128).sum();
            assert_eq!(r.mean_sigma_sq, q(2 * n * (s - 1), s), "{pair}");
            assert_eq!(r.degree as i128, s);
            assert_eq!(r.minimal_codimension, Some(s as i64 - 1));
        }
    }
}

#[test]
fn gate_only_at_linear_and_quadric_invariants() {
    for (pair, r) in grid() {
        let verdict = loi_zedda_classify(pair).unwrap();
        let below_2n = r.l2_ratio < q(2 * r.n as i128, 1);
        match verdict {
            LoiZeddaVerdict::StrictlyBelow => {
                assert_eq!((r.degree, r.sectional_genus), (1, 0), "{pair}");
                assert!(below_2n);
            }
            LoiZeddaVerdict::Equality => {
                assert_eq!((r.degree, r.sectional_genus), (2, 0), "{pair}");
                assert_eq!(r.l2_ratio, q(2 * r.n as i128, 1));
            }
            LoiZeddaVerdict::Above => {
                assert!(r.l2_ratio > q(2 * r.n as i128, 1), "{pair}");
            }
        }
    }
}

#[test]
fn rigidity_up_to_isomorphism() {
    // every pair below the bound is a linear space (P^n itself or S(1) = P^1);
    // every pair on it is a quadric presented in one of its guises
    for (pair, r) in grid() {
        if r.l2_ratio < q(2 * r.n as i128, 1) {
            assert_eq!(r.degree, 1, "{pair}");
            assert_eq!(r.h0, r.n as i64 + 1, "{pair}");
            assert!(matches!(
                r.classification,
                Classification::Linear | Classification::RationalNormalScroll
            ));
        } else if r.l2_ratio == q(2 * r.n as i128, 1) && r.sectional_genus == 0 {
            assert_eq!(r.degree, 2, "{pair}");
            assert_eq!(r.minimal_codimension, Some(1), "{pair}: a hypersurface");
            assert!(matches!(
                r.classification,
                Classification::Quadric | Classification::RationalNormalScroll
            ));
        }
    }
}

#[test]
fn genus_one_pairs_sit_at_twice_the_dimension() {
    for (pair, r) in grid() {
        if r.sectional_genus == 1 {
            assert_eq!(r.mean_sigma_sq, q(2 * r.n as i128, 1), "{pair}");
            assert_eq!(r.classification, Classification::GenusOneBoundary);
        }
        if r.del_pezzo {
            assert_eq!(r.sectional_genus, 1, "{pair}");
        }
    }
}

#[test]
fn scroll_one_one_is_the_quadric_surface() {
    let a = invariants(&PolarizedPair::scroll(&[1, 1]).unwrap()).unwrap();
    let b = invariants(&PolarizedPair::hypersurface(2, 2).unwrap()).unwrap();
    let c = invariants(&PolarizedPair::product(&[1, 1], &[1, 1]).unwrap()).unwrap();
    for other in [&b, &c] {
        assert_eq!(a.degree, other.degree);
        assert_eq!(a.sectional_genus, other.sectional_genus);
        assert_eq!(a.h0, other.h0);
        assert_eq!(a.mean_sigma_sq, other.mean_sigma_sq);
        assert_eq!(a.l2_ratio, other.l2_ratio);
        assert_eq!(a.minimal_codimension, other.minimal_codimension);
    }
}
