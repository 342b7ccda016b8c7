//! Intersection numbers in a few truncated rings: the degree of a scroll,
//! the canonical term on a product, and a hand-built presentation.

use num_bigint::BigInt;
use num_traits::One;
use polrig::chowring::{
    integrate, make_ring, multiply, power, Generator, Monomial, RewriteRule, RingPresentation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // S(1,2,3): L = xi, deg = xi^3
    let ring = make_ring(RingPresentation::scroll(3, 6))?;
    let xi = ring.generator("xi")?;
    let h = ring.generator("h")?;
    println!("scroll(1,2,3): xi^3 = {}", integrate(&power(&xi, 3)));
    // K = -3 xi + (6 - 2) h, so (K + 2L) L^2 = (-xi + 4h) xi^2
    let k_plus = ring.linear(&[-1, 4]);
    println!(
        "  (K + 2L) L^2 = {}",
        integrate(&multiply(&k_plus, &power(&xi, 2))?)
    );
    println!("  xi^2 h = {}", integrate(&multiply(&power(&xi, 2), &h)?));

    // P^1 x P^2 with L = h1 + h2
    let ring = make_ring(RingPresentation::product(&[1, 2]))?;
    let l = ring.linear(&[1, 1]);
    let canonical = ring.linear(&[-2, -3]);
    let top = power(&l, 3);
    let adjoint = multiply(&canonical.add(&l.scale_int(2))?, &power(&l, 2))?;
    println!(
        "P1 x P2, O(1,1): L^3 = {}, (K + 2L) L^2 = {}",
        integrate(&top),
        integrate(&adjoint)
    );

    // the quadric surface by hand: Q[a, b]/(a^2, b^2), ∫ ab = 1
    let quadric = make_ring(RingPresentation {
        generators: vec![Generator::new("a", 1), Generator::new("b", 1)],
        truncation: 2,
        rules: vec![
            RewriteRule::to_zero(Monomial::new(vec![2, 0])),
            RewriteRule::to_zero(Monomial::new(vec![0, 2])),
        ],
        fundamental: Monomial::new(vec![1, 1]),
        fundamental_integral: BigInt::one(),
    })?;
    let l = quadric.linear(&[1, 1]);
    println!("quadric surface: (a + b)^2 = {}", integrate(&power(&l, 2)));
    Ok(())
}
