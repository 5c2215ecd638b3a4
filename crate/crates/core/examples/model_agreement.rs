//! The delta-mixture and Hall models reproduce the quantum joint
//! distribution exactly, although their λ distributions depend on both
//! settings.

use std::f64::consts::PI;

use belllab::estimator::lambda_independence_residual;
use belllab::models::{BellModel, DeltaMixtureModel, HallModel, LambdaLaw, LocalBaselineModel};
use belllab::{qm_joint, PolAngle, Result};

fn main() -> Result<()> {
    let models: [&dyn BellModel; 3] = [&DeltaMixtureModel, &HallModel, &LocalBaselineModel];
    let k = 16;
    for m in models {
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let a = PolAngle::new(i as f64 * PI / k as f64);
                let b = PolAngle::new(j as f64 * PI / k as f64);
                worst = worst.max(m.joint_outcome_dist(a, b)?.max_abs_diff(&qm_joint(a, b)));
            }
        }
        println!("{:<15} max |P - P_QM| over {k}x{k} settings: {worst:.3e}", m.name());
    }

    let (a, b) = (PolAngle::ZERO, PolAngle::from_pi_multiple(0.125));
    if let Some(LambdaLaw::Atoms(atoms)) = DeltaMixtureModel.hidden_variables().map(|h| h.lambda_law(a, b)) {
        println!("delta-mixture atoms at ({a}, {b}):");
        for (l, w) in atoms {
            println!("  λ = {l}  weight {w}");
        }
    }

    let pairs = [
        ((a, b), (a, PolAngle::from_pi_multiple(0.375))),
        ((a, b), (PolAngle::from_pi_multiple(0.25), b)),
    ];
    for m in models {
        for (p, q) in pairs {
            let tv = lambda_independence_residual(m, p, q)?;
            println!("{:<15} TV(λ | {}, {} ; λ | {}, {}) = {tv:.4}", m.name(), p.0, p.1, q.0, q.1);
        }
    }
    Ok(())
}
