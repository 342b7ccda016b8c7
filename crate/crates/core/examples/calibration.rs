//! Scalar curvature of P^n in its own chart, against n(n+1), at a few steps.

use polrig::numgeo::{calibrate, calibrate_with_kappa, DEFAULT_STEP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=3 {
        for step in [1e-2, 1e-3, DEFAULT_STEP] {
            let r = calibrate(n, step)?;
            println!(
                "P^{n} step {step:.0e}: max |S - {}| = {:.2e}, halving ratio {:.3}",
                r.target, r.max_deviation, r.convergence_ratio
            );
        }
    }
    // with the wrong normalization the curvature scales by 2/κ
    let off = calibrate_with_kappa(2, DEFAULT_STEP, 1.0)?;
    println!(
        "P^2 with κ = 1: mean S = {:.6} (passed: {})",
        off.mean_scalar, off.passed
    );
    Ok(())
}
