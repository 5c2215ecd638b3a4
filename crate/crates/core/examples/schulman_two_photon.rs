//! Two photons sharing one initial polarization: the joint distribution
//! on a λ grid and where the posterior puts λ.

use belllab::schulman::{default_grid, two_photon_joint, KickWidth};
use belllab::{qm_joint, PolAngle, Result};

fn main() -> Result<()> {
    let (a, b) = (PolAngle::ZERO, PolAngle::from_pi_multiple(0.125));
    for g in [1e-1, 1e-2, 1e-3, 1e-4] {
        let grid = default_grid(g);
        let r = two_photon_joint(a, b, KickWidth::new(g)?, grid)?;
        println!(
            "γ = {g:<6} grid {grid:>7}  <AB> = {:.8}  cos(2a-2b)/cosh 4γ = {:.8}  max |P - P_QM| = {:.2e}",
            r.joint.correlator(),
            (2.0 * (a.radians() - b.radians())).cos() / (4.0 * g).cosh(),
            r.joint.max_abs_diff(&qm_joint(a, b))
        );
    }

    let g = 1e-4;
    let r = two_photon_joint(a, b, KickWidth::new(g)?, default_grid(g))?;
    println!("\nposterior mass near the four boundary polarizations (γ = {g}):");
    for c in [a, a.perpendicular(), b, b.perpendicular()] {
        println!("  {c}: ±3γ {:.4}  ±100γ {:.4}", r.window_mass(c, 3.0 * g), r.window_mass(c, 100.0 * g));
    }
    // outcome pairs are indexed like the joint: [0][0] is (+, +)
    let peak = r.posterior_by_outcome[0][0].iter().cloned().fold(0.0, f64::max);
    println!("peak posterior density given (+, +): {peak:.1}");
    Ok(())
}
