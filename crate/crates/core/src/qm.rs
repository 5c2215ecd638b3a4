//! Quantum predictions for two photons in the spin-zero Bell state.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use serde::{Deserialize, Serialize};

use crate::angle::{canonical_diff, Outcome, PolAngle};
use crate::error::Result;
use crate::models::{BellModel, Run};
use crate::rng::RngStream;

/// Joint distribution of the two outcomes, indexed by `(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDist {
    /// `p[A][B]` with index 0 for `+` and 1 for `-`.
    pub p: [[f64; 2]; 2],
}

impl JointDist {
    pub fn from_fn<F: FnMut(Outcome, Outcome) -> f64>(mut f: F) -> Self {
        let mut p = [[0.0; 2]; 2];
        for a in Outcome::BOTH {
            for b in Outcome::BOTH {
                p[a.index()][b.index()] = f(a, b);
            }
        }
        JointDist { p }
    }

    pub fn get(&self, a: Outcome, b: Outcome) -> f64 {
        self.p[a.index()][b.index()]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// `⟨AB⟩ = Σ A·B·P(A, B)`.
    pub fn correlator(&self) -> f64 {
        self.p[0][0] + self.p[1][1] - self.p[0][1] - self.p[1][0]
    }

    pub fn marginal_first(&self, a: Outcome) -> f64 {
        let row = self.p[a.index()];
        row[0] + row[1]
    }

    pub fn marginal_second(&self, b: Outcome) -> f64 {
        self.p[0][b.index()] + self.p[1][b.index()]
    }

    pub fn max_abs_diff(&self, other: &JointDist) -> f64 {
        self.p
            .iter()
            .flatten()
            .zip(other.p.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Rescaled so the entries sum to one.
    pub fn normalized(&self) -> JointDist {
        let t = self.total();
        JointDist::from_fn(|a, b| self.get(a, b) / t)
    }
}

/// The four settings of a CHSH experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: PolAngle,
    pub a_prime: PolAngle,
    pub b: PolAngle,
    pub b_prime: PolAngle,
}

impl ChshSettings {
    pub fn new(a: PolAngle, a_prime: PolAngle, b: PolAngle, b_prime: PolAngle) -> Self {
        ChshSettings {
            a,
            a_prime,
            b,
            b_prime,
        }
    }

    /// Setting pairs in CHSH order: `(a,b)`, `(a',b)`, `(a,b')`, `(a',b')`.
    /// The last pair enters the CHSH combination with a minus sign.
    pub fn pairs(&self) -> [(PolAngle, PolAngle); 4] {
        [
            (self.a, self.b),
            (self.a_prime, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b_prime),
        ]
    }
}

pub fn qm_joint(a: PolAngle, b: PolAngle) -> JointDist {
    let c = qm_correlator(a, b);
    JointDist::from_fn(|x, y| 0.25 * (1.0 + (x * y).value() * c))
}

/// `⟨AB⟩ = cos(2a − 2b)`.
pub fn qm_correlator(a: PolAngle, b: PolAngle) -> f64 {
    (2.0 * canonical_diff(a, b)).cos()
}

/// Settings of maximal quantum violation: `a = 0, a' = π/4, b = π/8, b' = −π/8`.
pub fn tsirelson_settings() -> ChshSettings {
    ChshSettings::new(
        PolAngle::ZERO,
        PolAngle::new(FRAC_PI_4),
        PolAngle::new(FRAC_PI_8),
        PolAngle::new(-FRAC_PI_8),
    )
}

/// CHSH combination of the quantum correlators.
pub fn qm_chsh(settings: &ChshSettings) -> f64 {
    let [c1, c2, c3, c4] = settings.pairs().map(|(a, b)| qm_correlator(a, b));
    crate::estimator::chsh_value(c1, c2, c3, c4)
}

/// The quantum prediction as a [`BellModel`]: outcomes drawn directly from
/// [`qm_joint`], with no hidden variable.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuantumModel;

impl BellModel for QuantumModel {
    fn name(&self) -> &'static str {
        "qm-reference"
    }

    fn joint_outcome_dist(&self, a: PolAngle, b: PolAngle) -> Result<JointDist> {
        Ok(qm_joint(a, b))
    }

    fn sample_run(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<Run> {
        let first = Outcome::from_sign(rng.bernoulli(0.5));
        let agree = rng.bernoulli(0.5 * (1.0 + qm_correlator(a, b)));
        Ok(Run {
            lambda: None,
            a: first,
            b: if agree { first } else { first.flipped() },
        })
    }
}
