//! Two entangled photons: two single-photon kick paths whose unknown
//! initial polarizations are the same hidden angle λ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::{canonical_diff, Outcome, PolAngle};
use crate::error::{Error, Result};
use crate::models::{separable_joint, separable_sample, BellModel, HiddenVariableModel, LambdaLaw, Run};
use crate::qm::JointDist;
use crate::rng::RngStream;

use super::bridge::{sample_cauchy_product, RETRY_BUDGET};
use super::family::{family_weight, sample_winding, KickWidth};

/// Minimum λ grid points per kick width γ.
pub const MIN_POINTS_PER_WIDTH: f64 = 8.0;

/// Family weight of ending on the `outcome` family of `setting` from λ.
fn wing_weight(lambda: f64, setting: PolAngle, outcome: Outcome, gamma: f64) -> f64 {
    let target = match outcome {
        Outcome::Plus => setting,
        Outcome::Minus => setting.perpendicular(),
    };
    family_weight(lambda - target.radians(), gamma)
}

/// λ grid result of [`two_photon_joint`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonJoint {
    pub joint: JointDist,
    pub gamma: f64,
    /// Grid spacing; node `i` sits at `λ = i·step`.
    pub step: f64,
    /// Posterior density of λ over all outcomes.
    pub posterior: Vec<f64>,
    /// Posterior density of λ given each outcome pair, indexed like
    /// [`JointDist::p`].
    pub posterior_by_outcome: [[Vec<f64>; 2]; 2],
}

impl TwoPhotonJoint {
    pub fn grid_len(&self) -> usize {
        self.posterior.len()
    }

    /// Posterior mass of the nodes within `half_width` of `center` (mod π).
    pub fn window_mass(&self, center: PolAngle, half_width: f64) -> f64 {
        self.posterior
            .iter()
            .enumerate()
            .filter(|(i, _)| canonical_diff(PolAngle::new(*i as f64 * self.step), center).abs() <= half_width)
            .map(|(_, d)| d * self.step)
            .sum()
    }
}

/// Outcome joint and λ posterior on a uniform grid of `grid` points over
/// `[0, π)`, with a flat prior on λ and weights
/// `w(λ, A, B) = F_γ(λ → a-family(A)) · F_γ(λ → b-family(B))`.
///
/// The integrand is smooth and π-periodic, so the rectangle rule on the
/// periodic grid converges geometrically once the peaks are resolved.
pub fn two_photon_joint(a: PolAngle, b: PolAngle, gamma: KickWidth, grid: usize) -> Result<TwoPhotonJoint> {
    let g = gamma.require_positive()?;
    if grid < 64 {
        return Err(Error::invalid(format!("λ grid needs at least 64 points, got {grid}")));
    }
    let step = PI / grid as f64;
    let per_width = g / step;
    if per_width < MIN_POINTS_PER_WIDTH {
        return Err(Error::Resolution {
            points_per_width: per_width,
            required: MIN_POINTS_PER_WIDTH,
        });
    }

    let mut by_outcome: [[Vec<f64>; 2]; 2] = Default::default();
    let mut mass = [[0.0; 2]; 2];
    for x in Outcome::BOTH {
        for y in Outcome::BOTH {
            let w: Vec<f64> = (0..grid)
                .map(|i| {
                    let l = i as f64 * step;
                    wing_weight(l, a, x, g) * wing_weight(l, b, y, g)
                })
                .collect();
            mass[x.index()][y.index()] = w.iter().sum::<f64>() * step;
            by_outcome[x.index()][y.index()] = w;
        }
    }
    let total: f64 = mass.iter().flatten().sum();

    let mut posterior = vec![0.0; grid];
    for x in 0..2 {
        for y in 0..2 {
            let w = &mut by_outcome[x][y];
            for (p, v) in posterior.iter_mut().zip(w.iter()) {
                *p += v / total;
            }
            let m = mass[x][y];
            w.iter_mut().for_each(|v| *v /= m);
        }
    }

    Ok(TwoPhotonJoint {
        joint: JointDist {
            p: mass.map(|row| row.map(|m| m / total)),
        },
        gamma: g,
        step,
        posterior,
        posterior_by_outcome: by_outcome,
    })
}

/// Smallest power-of-two grid meeting the resolution requirement for γ.
pub fn default_grid(gamma: f64) -> usize {
    let need = (MIN_POINTS_PER_WIDTH * PI / gamma).ceil() as usize;
    need.max(64).next_power_of_two()
}

/// The two-photon Schulman model as a hidden-variable model.
///
/// λ has density proportional to `Z_a(λ) Z_b(λ)` with
/// `Z_s(λ) = F_γ(λ − s) + F_γ(λ − s − π/2)`, and each photon's outcome
/// probability is its single-photon family ratio starting from λ.
#[derive(Clone, Copy, Debug)]
pub struct SchulmanPairModel {
    gamma: f64,
}

impl SchulmanPairModel {
    pub fn new(gamma: KickWidth) -> Result<Self> {
        Ok(SchulmanPairModel {
            gamma: gamma.require_positive()?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn wing_total(&self, lambda: f64, s: PolAngle) -> f64 {
        wing_weight(lambda, s, Outcome::Plus, self.gamma) + wing_weight(lambda, s, Outcome::Minus, self.gamma)
    }

    /// `∫ Z_a Z_b dλ`. Wrapped Cauchy laws convolve to width 2γ.
    fn normalizer(&self, a: PolAngle, b: PolAngle) -> f64 {
        let d = canonical_diff(a, b);
        let g2 = 2.0 * self.gamma;
        2.0 * family_weight(d, g2) + 2.0 * family_weight(d + PI / 2.0, g2)
    }

    fn p_plus(&self, setting: PolAngle, lambda: PolAngle) -> f64 {
        // F(x) / (F(x) + F(x − π/2)) = ½ + cos 2x / (2 cosh 2γ)
        let x = canonical_diff(lambda, setting);
        0.5 + (2.0 * x).cos() / (2.0 * (2.0 * self.gamma).cosh())
    }
}

impl BellModel for SchulmanPairModel {
    fn name(&self) -> &'static str {
        "schulman-2"
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

impl HiddenVariableModel for SchulmanPairModel {
    fn lambda_law(&self, a: PolAngle, b: PolAngle) -> LambdaLaw {
        let model = *self;
        let norm = self.normalizer(a, b);
        let mut breakpoints: Vec<f64> = [a, a.perpendicular(), b, b.perpendicular()]
            .iter()
            .map(|s| s.radians())
            .collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        LambdaLaw::Density {
            density: Box::new(move |l| model.wing_total(l, a) * model.wing_total(l, b) / norm),
            breakpoints,
        }
    }

    /// Pick the pair of boundary families, then the relative winding, then
    /// λ from the product of the two Cauchy factors.
    fn sample_lambda(&self, a: PolAngle, b: PolAngle, rng: &mut RngStream) -> Result<PolAngle> {
        let g = self.gamma;
        let mut pairs = Vec::with_capacity(4);
        for alpha in [a, a.perpendicular()] {
            for beta in [b, b.perpendicular()] {
                let d = canonical_diff(beta, alpha);
                pairs.push((alpha, d, family_weight(d, 2.0 * g)));
            }
        }
        let total: f64 = pairs.iter().map(|p| p.2).sum();
        let mut u = rng.uniform() * total;
        let mut chosen = pairs[3];
        for p in &pairs {
            if u < p.2 {
                chosen = *p;
                break;
            }
            u -= p.2;
        }
        let (alpha, d, _) = chosen;
        let separation = d + sample_winding(d, 2.0 * g, rng) as f64 * PI;
        let x = sample_cauchy_product(g, g, separation, rng, RETRY_BUDGET).map_err(|tries| Error::Bridge {
            step: 0,
            steps: 1,
            tries,
            remaining: separation,
        })?;
        Ok(alpha.rotated(x))
    }

    fn outcome_prob_1(&self, a: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        let p = self.p_plus(a, lambda);
        match outcome {
            Outcome::Plus => p,
            Outcome::Minus => 1.0 - p,
        }
    }

    fn outcome_prob_2(&self, b: PolAngle, lambda: PolAngle, outcome: Outcome) -> f64 {
        self.outcome_prob_1(b, lambda, outcome)
    }
}
