//! Simulation and verification of hidden-variable models for Bell-type
//! polarization experiments.
//!
//! The crate provides
//!
//! - polarization angle arithmetic modulo π and Malus' law ([`angle`]),
//! - closed-form quantum predictions for the spin-zero Bell state ([`qm`]),
//! - a hidden-variable model contract with the delta-mixture, Hall,
//!   locally-causal baseline and PR-box models ([`models`]),
//! - the Schulman Lévy-flight model: Cauchy family sums, one- and
//!   two-photon predictions and boundary-conditioned kick paths
//!   ([`schulman`]),
//! - Monte-Carlo and quadrature estimators for correlators, CHSH values,
//!   locality residuals and the Hall mutual information ([`estimator`]),
//! - a reproducible experiment runner backing the `belllab` binary ([`cli`]).
//!
//! Every Monte-Carlo routine draws from [`RngStream`], a seeded counter-based
//! stream that can be split into independent shards, so results are
//! bit-identical regardless of thread count.

pub mod angle;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod models;
pub mod qm;
pub mod quad;
pub mod rng;
pub mod schulman;
pub mod stats;

pub use angle::{canonical_diff, malus_prob, Outcome, PolAngle};
pub use error::{Error, Result};
pub use qm::{qm_chsh, qm_correlator, qm_joint, tsirelson_settings, ChshSettings, JointDist, QuantumModel};
pub use rng::RngStream;
