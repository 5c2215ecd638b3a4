use std::f64::consts::PI;

use crate::angle::{malus_prob, Outcome, PolAngle};
use crate::error::Result;
use crate::qm::JointDist;
use crate::rng::RngStream;

use super::{separable_joint, separable_sample, BellModel, HiddenVariableModel, LambdaLaw, Run};

/// Locally causal control: λ uniform on `[0, π)` regardless of the
/// settings, outcomes by Malus' law. Its correlator is `½ cos(2a − 2b)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LocalBaselineModel;

impl BellModel for LocalBaselineModel {
    fn name(&self) -> &'static str {
        "local-baseline"
    }

    fn joint_outcome_dist(&self, a: PolAngle, b: PolAngle) -> Result<JointDist> {
        separable_joint(self, a, b)
    }

    fn sample_run(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<Run> {
        separable_sample(self, a, b, rng)
    }

    fn hidden_variables(&self) -> Option<&dyn HiddenVariableModel> {
        Some(self)
    }
}

impl HiddenVariableModel for LocalBaselineModel {
    fn lambda_law(&self, _a: PolAngle, _b: PolAngle) -> LambdaLaw {
        LambdaLaw::Density {
            density: Box::new(|_| 1.0 / PI),
            breakpoints: Vec::new(),
        }
    }

    fn sample_lambda(&self, _a: PolAngle, _b: PolAngle, rng: &mut RngStream) -> Result<PolAngle> {
        Ok(PolAngle::new(rng.uniform() * PI))
    }

    fn outcome_prob_1(&self, a: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        malus_prob(a, lambda, outcome)
    }

    fn outcome_prob_2(&self, b: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        malus_prob(b, lambda, outcome)
    }
}
