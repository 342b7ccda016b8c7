//! Monte Carlo estimate of the mean of |σ|² on a few explicit embeddings,
//! next to the exact value from the catalog.
//!
//! cargo run --release --example monte_carlo -- [samples] [seed]

use polrig::catalog::{mean_sigma_sq, PolarizedPair};
use polrig::numgeo::{embed, mean_sigma_numeric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples: usize = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(50_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2024);

    let pairs = [
        PolarizedPair::projective_space(2, 2)?,
        PolarizedPair::scroll(&[1, 2])?,
        PolarizedPair::product(&[1, 1], &[1, 1])?,
        PolarizedPair::hypersurface(3, 2)?,
    ];
    for pair in &pairs {
        let exact = mean_sigma_sq(pair)?;
        let chart = embed(pair)?;
        let t = std::time::Instant::now();
        let r = mean_sigma_numeric(&chart, samples, seed)?;
        println!(
            "{pair:<38} exact {exact:>5}  estimate {:.5} ± {:.5} (disc {:.1e})  z {:+.2}  vol {:.4} ± {:.4}  [{:.1?}]",
            r.mean_estimate,
            r.standard_error,
            r.discretization_error,
            r.z_score(polrig::chowring::to_f64(&exact)),
            r.volume_ratio_estimate,
            r.volume_ratio_standard_error,
            t.elapsed()
        );
    }
    Ok(())
}
