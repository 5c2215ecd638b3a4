//! Schulman's Lévy-flight model of photon polarization.
//!
//! Between two polarizers the polarization angle `q(t)` receives Cauchy
//! kicks whose widths add to γ, so the net rotation is Cauchy(γ). Summing
//! over all rotations that end on the same polarization family and
//! normalizing against the perpendicular family gives Malus' law as γ → 0.

mod bridge;
mod family;
mod pair;
mod single;

pub use bridge::{
    bridge_consistency_test, bridge_ensemble, cauchy_stability_test, dominant_kick_stats, endpoint_is_exact,
    sample_bridge, sample_conditioned_path, KickStats, PathSpec, PathSummary, PolarizationPath, DOMINANCE_FLOOR,
    RETRY_BUDGET,
};
pub use family::{
    exact_family_sum, family_weight, family_weight_truncated, net_rotation_density, truncated_family_sum,
    FamilySumConfig, KickWidth,
};
pub use pair::{default_grid, two_photon_joint, SchulmanPairModel, TwoPhotonJoint, MIN_POINTS_PER_WIDTH};
pub use single::{sequential_outcome_probs, single_photon_outcome_prob};
