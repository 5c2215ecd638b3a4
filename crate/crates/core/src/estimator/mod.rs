//! Monte-Carlo and quadrature estimators over [`BellModel`]s.
//!
//! Sampling is split into fixed-size shards. Shard `i` of a run draws from
//! `rng.split(i)` and only integer counts are merged, so estimates do not
//! depend on how many rayon workers execute the shards.

mod information;
mod locality;

pub use information::{averaged_hall_density, hall_information, mutual_information_hall, MIEstimate};
pub use locality::{
    lambda_independence_residual, screening_residual, ScreeningReport, MIN_BIN_OCCUPANCY, SCREENING_BINS,
};

use std::f64::consts::LN_10;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{Outcome, PolAngle};
use crate::error::Result;
use crate::models::{BellModel, Run};
use crate::qm::ChshSettings;
use crate::rng::RngStream;

/// Trials per shard.
pub const SHARD_SIZE: u64 = 1 << 14;

/// Draw `n` trials at `(a, b)` shard by shard, folding each shard into a
/// fresh accumulator and merging the shard results in index order.
pub(crate) fn sharded_runs<T, F, M>(
    model: &dyn BellModel,
    a: PolAngle,
    b: PolAngle,
    n: u64,
    rng: &RngStream,
    fold: F,
    merge: M,
) -> Result<T>
where
    T: Default + Send,
    F: Fn(&mut T, Run) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    let parts: Vec<T> = (0..shards)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i);
            let len = SHARD_SIZE.min(n - i * SHARD_SIZE);
            let mut acc = T::default();
            for _ in 0..len {
                fold(&mut acc, model.sample_run(a, b, &mut r)?);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(T::default(), merge))
}

/// Sample mean of `A·B` with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: u64,
}

impl CorrelatorEstimate {
    /// From the number of agreeing trials out of `samples`.
    pub fn from_counts(agree: u64, samples: u64) -> Self {
        let n = samples as f64;
        let value = (2.0 * agree as f64 - n) / n;
        // A·B = ±1, so the sample variance is n/(n−1)·(1 − mean²)
        let standard_error = if samples > 1 {
            ((1.0 - value * value).max(0.0) / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        CorrelatorEstimate {
            value,
            standard_error,
            samples,
        }
    }
}

pub fn estimate_correlator(
    model: &dyn BellModel,
    a: PolAngle,
    b: PolAngle,
    n: u64,
    rng: &RngStream,
) -> Result<CorrelatorEstimate> {
    if n == 0 {
        return Err(crate::Error::invalid("need at least one sample"));
    }
    let agree: u64 = sharded_runs(
        model,
        a,
        b,
        n,
        rng,
        |acc: &mut u64, run| *acc += u64::from(run.a == run.b),
        |x, y| x + y,
    )?;
    Ok(CorrelatorEstimate::from_counts(agree, n))
}

/// `|c1 + c2 + c3 − c4|` for correlators ordered as
/// `(a, b), (a', b), (a, b'), (a', b')`.
pub fn chsh_value(c1: f64, c2: f64, c3: f64, c4: f64) -> f64 {
    (c1 + c2 + c3 - c4).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub settings: ChshSettings,
    /// Ordered as [`ChshSettings::pairs`].
    pub correlators: [CorrelatorEstimate; 4],
    pub s: f64,
    pub standard_error: f64,
}

/// The four correlators of a CHSH experiment, pair `k` sampled on
/// `rng.split(k)`.
pub fn estimate_chsh(model: &dyn BellModel, settings: &ChshSettings, n: u64, rng: &RngStream) -> Result<ChshReport> {
    let pairs = settings.pairs();
    let mut correlators = [CorrelatorEstimate::from_counts(0, 1); 4];
    for (k, (a, b)) in pairs.into_iter().enumerate() {
        correlators[k] = estimate_correlator(model, a, b, n, &rng.split(k as u64))?;
    }
    let [c1, c2, c3, c4] = correlators.map(|c| c.value);
    let standard_error = correlators.iter().map(|c| c.standard_error.powi(2)).sum::<f64>().sqrt();
    Ok(ChshReport {
        settings: *settings,
        correlators,
        s: chsh_value(c1, c2, c3, c4),
        standard_error,
    })
}

/// `(A + A')B + (A − A')B'`, which is always ±2.
pub fn peres_identity_check(a: Outcome, a_prime: Outcome, b: Outcome, b_prime: Outcome) -> i32 {
    (a.sign() + a_prime.sign()) * b.sign() + (a.sign() - a_prime.sign()) * b_prime.sign()
}

/// Upper bound on the probability of observing `Ŝ ≥ s_hat` from a model
/// with `S ≤ 2`, kept as a base-10 logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValueBound {
    pub log10: f64,
}

impl PValueBound {
    /// The bound itself; underflows to zero for strong violations.
    pub fn value(self) -> f64 {
        10f64.powf(self.log10)
    }
}

/// Hoeffding bound `exp(−N(Ŝ − 2)²/8)` for independent trials with `n`
/// samples per correlator; 1 when `Ŝ ≤ 2`.
pub fn chsh_pvalue(s_hat: f64, n: u64) -> PValueBound {
    let excess = s_hat - 2.0;
    if excess <= 0.0 {
        return PValueBound { log10: 0.0 };
    }
    PValueBound {
        log10: -(n as f64) * excess * excess / (8.0 * LN_10),
    }
}
