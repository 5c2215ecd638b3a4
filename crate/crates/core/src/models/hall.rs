use std::f64::consts::{FRAC_PI_4, PI};

use crate::angle::{canonical_diff, Outcome, PolAngle};
use crate::error::Result;
use crate::qm::JointDist;
use crate::rng::RngStream;

use super::{separable_joint, BellModel, HiddenVariableModel, LambdaLaw, Run};

/// Hall's deterministic model adapted to photon polarization.
///
/// Outcomes are the signs `À = sign cos(2a − 2λ)`, `B̀ = sign cos(2b − 2λ)`
/// and λ is drawn from a setting-dependent, piecewise constant density.
#[derive(Clone, Copy, Debug, Default)]
pub struct HallModel;

/// `sign cos(2·setting − 2λ)`, with an exact zero mapped to `+`.
fn hall_sign(setting: PolAngle, lambda: PolAngle) -> Outcome {
    Outcome::from_sign((2.0 * canonical_diff(setting, lambda)).cos() >= 0.0)
}

/// Density of λ at settings `(a, b)`.
///
/// `z = (2/π)·|2a − 2b|` uses the representative `|2a − 2b| = 2|Δ|` with
/// `Δ` the canonical difference, so `z ∈ [0, 2]`. On the measure-zero set
/// where numerator and denominator both vanish the density is taken as 0.
pub fn hall_density(a: PolAngle, b: PolAngle, lambda: PolAngle) -> f64 {
    let delta = canonical_diff(a, b);
    let z = 4.0 * delta.abs() / PI;
    let agree = (hall_sign(a, lambda) * hall_sign(b, lambda)).value();
    let num = 1.0 + agree * (2.0 * delta).cos();
    let den = 1.0 + agree * (1.0 - z);
    if den <= 0.0 {
        0.0
    } else {
        num / den / PI
    }
}

/// Points in `[0, π)` where either sign flips: `a ± π/4`, `b ± π/4`.
pub fn hall_breakpoints(a: PolAngle, b: PolAngle) -> Vec<f64> {
    let mut pts: Vec<f64> = [a, b]
        .iter()
        .flat_map(|s| [s.rotated(FRAC_PI_4).radians(), s.rotated(-FRAC_PI_4).radians()])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

impl BellModel for HallModel {
    fn name(&self) -> &'static str {
        "hall"
    }

    fn joint_outcome_dist(&self, a: PolAngle, b: PolAngle) -> Result<JointDist> {
        separable_joint(self, a, b)
    }

    fn sample_run(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<Run> {
        let lambda = self.sample_lambda(a, b, rng)?;
        Ok(Run {
            lambda: Some(lambda),
            a: hall_sign(a, lambda),
            b: hall_sign(b, lambda),
        })
    }

    fn hidden_variables(&self) -> Option<&dyn HiddenVariableModel> {
        Some(self)
    }
}

impl HiddenVariableModel for HallModel {
    fn lambda_law(&self, a: PolAngle, b: PolAngle) -> LambdaLaw {
        LambdaLaw::Density {
            density: Box::new(move |l| hall_density(a, b, PolAngle::new(l))),
            breakpoints: hall_breakpoints(a, b),
        }
    }

    /// Exact draw: the density is constant between breakpoints.
    fn sample_lambda(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<PolAngle> {
        let mut edges = vec![0.0];
        edges.extend(hall_breakpoints(a, b));
        edges.push(PI);
        let pieces: Vec<(f64, f64, f64)> = edges
            .windows(2)
            .map(|w| {
                let mass = (w[1] - w[0]) * hall_density(a, b, PolAngle::new(0.5 * (w[0] + w[1])));
                (w[0], w[1], mass)
            })
            .collect();
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let mut u = rng.uniform() * total;
        let mut chosen = pieces[pieces.len() - 1];
        for piece in &pieces {
            if u < piece.2 {
                chosen = *piece;
                break;
            }
            u -= piece.2;
        }
        let (lo, hi, _) = chosen;
        Ok(PolAngle::new(lo + rng.uniform() * (hi - lo)))
    }

    fn outcome_prob_1(&self, a: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        if hall_sign(a, lambda) == outcome {
            1.0
        } else {
            0.0
        }
    }

    fn outcome_prob_2(&self, b: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        self.outcome_prob_1(b, lambda, outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadConfig};
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn density_example() {
        let v = hall_density(PolAngle::ZERO, PolAngle::new(FRAC_PI_8), PolAngle::ZERO);
        // both signs +, z = 1/2: (1/π)(1 + cos(π/4)) / 1.5
        let expected = (1.0 + (PI / 4.0).cos()) / 1.5 / PI;
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.362257).abs() < 5e-6);
    }

    #[test]
    fn density_normalized_by_piecewise_integration() {
        let (a, b) = (PolAngle::ZERO, PolAngle::new(FRAC_PI_8));
        let r = integrate(
            |l| hall_density(a, b, PolAngle::new(l)),
            0.0,
            PI,
            &hall_breakpoints(a, b),
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_settings_give_flat_density() {
        // z = 0 and À = B̀ everywhere, so the ratio is 2/2 and the density is 1/π
        let a = PolAngle::new(0.7);
        for i in 0..50 {
            let l = PolAngle::new(i as f64 * PI / 50.0 + 0.001);
            assert!((hall_density(a, a, l) - 1.0 / PI).abs() < 1e-15);
        }
    }

    #[test]
    fn tie_break_is_plus() {
        let a = PolAngle::ZERO;
        let l = PolAngle::new(FRAC_PI_4);
        // cos(−π/2) is a tiny positive number in f64; either way the result is +
        assert_eq!(hall_sign(a, l), Outcome::Plus);
    }

    #[test]
    fn outcomes_are_deterministic_in_lambda() {
        let (a, b) = (PolAngle::ZERO, PolAngle::new(FRAC_PI_8));
        let mut rng = RngStream::new(3, 3);
        for _ in 0..2000 {
            let r = HallModel.sample_run(a, b, &mut rng).unwrap();
            let l = r.lambda.unwrap();
            assert_eq!(r.a, hall_sign(a, l));
            assert_eq!(r.b, hall_sign(b, l));
        }
    }

    #[test]
    fn lambda_depends_on_settings() {
        let l = PolAngle::new(1.0);
        let d1 = hall_density(PolAngle::ZERO, PolAngle::new(FRAC_PI_8), l);
        let d2 = hall_density(PolAngle::new(PI / 4.0), PolAngle::new(FRAC_PI_8), l);
        assert!((d1 - d2).abs() > 0.01);
    }
}
