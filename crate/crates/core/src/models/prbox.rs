use crate::angle::{Outcome, PolAngle};
use crate::error::{Error, Result};
use crate::qm::{ChshSettings, JointDist};
use crate::rng::RngStream;

use super::{BellModel, Run};

/// Popescu–Rohrlich box over a fixed set of CHSH settings.
///
/// The settings map to binary inputs `(x, y)`: `a, b → 0` and `a', b' → 1`.
/// Outputs are uniformly random individually and satisfy `A·B = −1` iff
/// `x = y = 1`. There is no hidden variable.
#[derive(Clone, Copy, Debug)]
pub struct PrBoxModel {
    settings: ChshSettings,
}

impl PrBoxModel {
    pub fn new(settings: ChshSettings) -> Self {
        PrBoxModel { settings }
    }

    pub fn settings(&self) -> &ChshSettings {
        &self.settings
    }

    fn input(first: PolAngle, second: PolAngle, s: PolAngle) -> Result<u8> {
        if s == first {
            Ok(0)
        } else if s == second {
            Ok(1)
        } else {
            Err(Error::UnknownSetting(s.radians()))
        }
    }

    pub fn inputs(&self, a: PolAngle, b: PolAngle) -> Result<(u8, u8)> {
        Ok((
            Self::input(self.settings.a, self.settings.a_prime, a)?,
            Self::input(self.settings.b, self.settings.b_prime, b)?,
        ))
    }

    fn product(&self, a: PolAngle, b: PolAngle) -> Result<Outcome> {
        let (x, y) = self.inputs(a, b)?;
        Ok(Outcome::from_sign(x & y == 0))
    }
}

impl BellModel for PrBoxModel {
    fn name(&self) -> &'static str {
        "pr-box"
    }

    fn joint_outcome_dist(&self, a: PolAngle, b: PolAngle) -> Result<JointDist> {
        let prod = self.product(a, b)?;
        Ok(JointDist::from_fn(|x, y| if x * y == prod { 0.5 } else { 0.0 }))
    }

    fn sample_run(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<Run> {
        let prod = self.product(a, b)?;
        let first = Outcome::from_sign(rng.bernoulli(0.5));
        Ok(Run {
            lambda: None,
            a: first,
            b: first * prod,
        })
    }
}
