//! The spectrum of σ̄² over the catalog in one dimension, and the empty
//! window just above n.
//!
//! cargo run --release --example gap_scan -- [n] [max_degree]

use polrig::catalog::{second_gap_check, sigma_spectrum};
use polrig::chowring::to_f64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let d_max: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);

    let spectrum = sigma_spectrum(n, d_max)?;
    let low: Vec<String> = spectrum
        .iter()
        .take_while(|v| to_f64(v) <= 2.0 * n as f64)
        .map(|v| v.to_string())
        .collect();
    println!("n = {n}, d ≤ {d_max}: {} distinct values", spectrum.len());
    println!("values up to 2n: {}", low.join(", "));
    if n >= 3 {
        let g = second_gap_check(n, d_max)?;
        println!(
            "({n}, {}) empty: {}; least value above {n}: {}",
            2 * n - 2,
            g.holds,
            g.min_above_n
        );
    }
    Ok(())
}
