use crate::angle::{malus_prob, Outcome, PolAngle};
use crate::error::Result;
use crate::qm::JointDist;
use crate::rng::RngStream;

use super::{merge_atoms, separable_joint, separable_sample, BellModel, HiddenVariableModel, LambdaLaw, Run};

/// Both photons start polarized along one of `a`, `a + π/2`, `b`, `b + π/2`
/// with equal probability; each then passes its polarizer by Malus' law.
#[derive(Clone, Copy, Debug, Default)]
pub struct DeltaMixtureModel;

impl DeltaMixtureModel {
    fn candidates(a: PolAngle, b: PolAngle) -> [PolAngle; 4] {
        [a, a.perpendicular(), b, b.perpendicular()]
    }
}

impl BellModel for DeltaMixtureModel {
    fn name(&self) -> &'static str {
        "delta-mixture"
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

impl HiddenVariableModel for DeltaMixtureModel {
    fn lambda_law(&self, a: PolAngle, b: PolAngle) -> LambdaLaw {
        LambdaLaw::Atoms(merge_atoms(Self::candidates(a, b).map(|l| (l, 0.25))))
    }

    fn sample_lambda(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<PolAngle> {
        Ok(Self::candidates(a, b)[rng.below(4)])
    }

    fn outcome_prob_1(&self, a: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        malus_prob(a, lambda, outcome)
    }

    fn outcome_prob_2(&self, b: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        malus_prob(b, lambda, outcome)
    }
}
