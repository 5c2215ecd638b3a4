//! One photon in the Lévy-flight model: family sums, the approach to
//! Malus' law and sequential measurements.

use std::f64::consts::PI;

use belllab::schulman::{
    exact_family_sum, sequential_outcome_probs, single_photon_outcome_prob, truncated_family_sum, FamilySumConfig,
    KickWidth,
};
use belllab::{PolAngle, Result};

fn main() -> Result<()> {
    let cfg = FamilySumConfig::default();
    for k in [1.0, 2.0, 3.0, 4.0] {
        let x = k * PI / 8.0;
        println!(
            "Σ 1/(Δθ + nπ)² at Δθ = {k}π/8: truncated {:.12}, 1/sin² {:.12}",
            truncated_family_sum(x, &cfg)?,
            exact_family_sum(x)?
        );
    }

    println!("\nP(pass) at Δθ = π/8, cos² = {:.6}", (PI / 8.0).cos().powi(2));
    for g in [0.5, 0.1, 1e-2, 1e-3, 1e-4, 0.0] {
        let p = single_photon_outcome_prob(PolAngle::ZERO, PolAngle::from_pi_multiple(0.125), KickWidth::new(g)?, &cfg);
        println!("  γ = {g:<6} {p:.8}");
    }

    let angles = [0.0, 0.25, 0.0].map(PolAngle::from_pi_multiple);
    println!("\npolarizers at 0, π/4, 0 after preparation at 0 (γ → 0):");
    for (seq, p) in sequential_outcome_probs(&angles, KickWidth::LIMIT)? {
        let s: String = seq.iter().map(|o| o.to_string()).collect();
        println!("  {s}: {p:.4}");
    }
    Ok(())
}
