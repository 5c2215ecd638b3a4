//! Mutual information between the Hall λ and the settings.

use belllab::estimator::{averaged_hall_density, hall_information, mutual_information_hall};
use belllab::{PolAngle, Result};

fn main() -> Result<()> {
    for (m, k) in [(128, 16), (256, 32), (512, 64), (1024, 128)] {
        println!("λ grid {m:>5}, settings grid {k:>4}: {:.6} bits", hall_information(m, k));
    }
    let mi = mutual_information_hall(512, 64)?;
    println!("estimate {:.6} bits, refinement change {:.2e}", mi.bits, mi.error_estimate);
    for l in [0.0, 0.5, 1.0, 2.0] {
        println!("p̄({l}) · π = {:.5}", averaged_hall_density(64, PolAngle::new(l)) * std::f64::consts::PI);
    }
    Ok(())
}
