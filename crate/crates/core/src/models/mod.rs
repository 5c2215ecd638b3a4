//! Hidden-variable models of the two-photon Bell experiment.
//!
//! [`BellModel`] is what the estimators consume: a joint outcome
//! distribution and a sampler. Models that carry an explicit hidden
//! variable λ also implement [`HiddenVariableModel`], which splits the
//! model into a setting-dependent λ distribution and local outcome
//! probabilities, so that
//!
//! ```text
//! P(A, B) = ∫ dλ P_{a,b}(λ) P_a(A|λ) P_b(B|λ)
//! ```

mod delta;
mod hall;
mod local;
mod prbox;

pub use delta::DeltaMixtureModel;
pub use hall::{hall_breakpoints, hall_density, HallModel};
pub use local::LocalBaselineModel;
pub use prbox::PrBoxModel;

use std::f64::consts::PI;

use crate::angle::{canonical_diff, Outcome, PolAngle};
use crate::error::Result;
use crate::qm::JointDist;
use crate::quad::{integrate, QuadConfig};
use crate::rng::RngStream;

/// Atoms closer than this (modulo π) are treated as the same λ value.
pub const ATOM_TOLERANCE: f64 = 1e-12;

/// One simulated trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub lambda: Option<PolAngle>,
    pub a: Outcome,
    pub b: Outcome,
}

pub type DensityFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Distribution of λ over `[0, π)` for one pair of settings.
pub enum LambdaLaw {
    /// Point masses with weights summing to one.
    Atoms(Vec<(PolAngle, f64)>),
    /// A density in λ (radians), with the points where it is not smooth.
    Density {
        density: DensityFn,
        breakpoints: Vec<f64>,
    },
}

impl LambdaLaw {
    /// Total mass; one for every well-formed law.
    pub fn total_mass(&self) -> Result<f64> {
        match self {
            LambdaLaw::Atoms(atoms) => Ok(atoms.iter().map(|(_, w)| w).sum()),
            LambdaLaw::Density {
                density,
                breakpoints,
            } => Ok(integrate(density, 0.0, PI, breakpoints, &QuadConfig::default())?.value),
        }
    }
}

/// Merge atoms that coincide modulo π, summing their weights.
pub(crate) fn merge_atoms(atoms: impl IntoIterator<Item = (PolAngle, f64)>) -> Vec<(PolAngle, f64)> {
    let mut merged: Vec<(PolAngle, f64)> = Vec::new();
    for (at, w) in atoms {
        match merged
            .iter_mut()
            .find(|(m, _)| canonical_diff(*m, at).abs() <= ATOM_TOLERANCE)
        {
            Some(slot) => slot.1 += w,
            None => merged.push((at, w)),
        }
    }
    merged
}

pub trait BellModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn joint_outcome_dist(&self, a: PolAngle, b: PolAngle) -> Result<JointDist>;

    /// Draw one trial at settings `(a, b)`.
    fn sample_run(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<Run>;

    /// The λ decomposition, when the model has one.
    fn hidden_variables(&self) -> Option<&dyn HiddenVariableModel> {
        None
    }
}

pub trait HiddenVariableModel: BellModel {
    fn lambda_law(&self, a: PolAngle, b: PolAngle) -> LambdaLaw;

    fn sample_lambda(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<PolAngle>;

    /// `P_a(A | λ)` on the first wing.
    fn outcome_prob_1(&self, a: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64;

    /// `P_b(B | λ)` on the second wing.
    fn outcome_prob_2(&self, b: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64;
}

/// `∫ dλ P_{a,b}(λ) P_a(A|λ) P_b(B|λ)`: an exact sum for atoms, adaptive
/// quadrature split at the model's breakpoints for densities.
pub fn separable_joint<M: HiddenVariableModel + ?Sized>(
    model: &M,
    a: PolAngle,
    b: PolAngle,
) -> Result<JointDist> {
    let mut p = [[0.0; 2]; 2];
    match model.lambda_law(a, b) {
        LambdaLaw::Atoms(atoms) => {
            for x in Outcome::BOTH {
                for y in Outcome::BOTH {
                    p[x.index()][y.index()] = atoms
                        .iter()
                        .map(|&(l, w)| {
                            w * model.outcome_prob_1(a, l, x) * model.outcome_prob_2(b, l, y)
                        })
                        .sum();
                }
            }
        }
        LambdaLaw::Density {
            density,
            breakpoints,
        } => {
            let cfg = QuadConfig::default();
            for x in Outcome::BOTH {
                for y in Outcome::BOTH {
                    let f = |l: f64| {
                        let lam = PolAngle::new(l);
                        density(l) * model.outcome_prob_1(a, lam, x) * model.outcome_prob_2(b, lam, y)
                    };
                    p[x.index()][y.index()] = integrate(f, 0.0, PI, &breakpoints, &cfg)?.value;
                }
            }
        }
    }
    Ok(JointDist { p })
}

/// Draw λ, then both outcomes independently given λ.
pub fn separable_sample<M: HiddenVariableModel + ?Sized>(
    model: &M,
    a: PolAngle,
    b: PolAngle,
    rng: &mut RngStream,
) -> Result<Run> {
    let lambda = model.sample_lambda(a, b, rng)?;
    let pa = model.outcome_prob_1(a, lambda, Outcome::Plus);
    let pb = model.outcome_prob_2(b, lambda, Outcome::Plus);
    Ok(Run {
        lambda: Some(lambda),
        a: Outcome::from_sign(rng.bernoulli(pa)),
        b: Outcome::from_sign(rng.bernoulli(pb)),
    })
}
