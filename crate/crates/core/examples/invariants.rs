//! Exact invariant reports for a handful of catalog pairs.

use polrig::catalog::{invariants, loi_zedda_classify, PolarizedPair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        PolarizedPair::projective_space(3, 1)?,
        PolarizedPair::hypersurface(4, 2)?,
        PolarizedPair::projective_space(2, 2)?,
        PolarizedPair::scroll(&[2, 3, 4])?,
        PolarizedPair::hypersurface(3, 3)?,
        PolarizedPair::complete_intersection(3, &[2, 2])?,
        PolarizedPair::hypersurface(2, 5)?,
        PolarizedPair::product(&[1, 2], &[2, 1])?,
    ];
    println!(
        "{:<44} {:>4} {:>4} {:>4} {:>8} {:>8}  {:<14} tag",
        "pair", "d", "g", "Δ", "σ̄²", "L2", "gate"
    );
    for pair in &pairs {
        let r = invariants(pair)?;
        let tag = if r.del_pezzo {
            format!("{} (del Pezzo)", r.classification)
        } else {
            r.classification.to_string()
        };
        println!(
            "{:<44} {:>4} {:>4} {:>4} {:>8} {:>8}  {:<14} {tag}",
            pair.to_string(),
            r.degree,
            r.sectional_genus,
            r.delta_genus,
            r.mean_sigma_sq.to_string(),
            r.l2_ratio.to_string(),
            loi_zedda_classify(pair)?.to_string(),
        );
    }
    Ok(())
}
