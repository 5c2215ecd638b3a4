//! Kick paths conditioned on both polarizers, and their single-kick
//! structure.

use belllab::schulman::{bridge_ensemble, cauchy_stability_test, sample_bridge, KickWidth, PathSpec, PathSummary};
use belllab::{PolAngle, Result, RngStream};

fn main() -> Result<()> {
    let spec = PathSpec::new(100, KickWidth::new(1e-3)?, PolAngle::ZERO, PolAngle::from_pi_multiple(0.125))?;
    let rng = RngStream::new(1, 0);

    let path = sample_bridge(&spec, &mut rng.split(0))?;
    let s = PathSummary::of(&path);
    println!(
        "one path: net rotation {:.6}, largest kick at step {:?} carrying {:.4} of |Δq|",
        path.net_rotation(),
        s.kick_index,
        s.net_fraction.unwrap_or(0.0)
    );

    let n = 20_000;
    let (stats, exact) = bridge_ensemble(&spec, n, &rng.split(1))?;
    let chi = stats.kick_time_uniformity();
    println!("{n} bridges, endpoints exact: {exact}");
    println!("  largest kick > 99% of |Δq|:          {:.2}%", 100.0 * stats.net_dominant_share(0.99));
    println!("  largest kick > 99% of summed kicks:  {:.2}%", 100.0 * stats.dominant_share(0.99));
    println!("  kick-time χ² = {:.1}, p = {:.3}", chi.statistic, chi.p_value);

    let ks = cauchy_stability_test(100, 1e-3, n, &rng.split(2));
    println!("sum of 100 Cauchy(γ/100) kicks vs Cauchy(γ): KS D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
    Ok(())
}
