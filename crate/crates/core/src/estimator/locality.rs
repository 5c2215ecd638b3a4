//! Empirical screening and λ-independence checks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::{canonical_diff, PolAngle};
use crate::error::{Error, Result};
use crate::models::{merge_atoms, BellModel, LambdaLaw};
use crate::quad::{integrate, QuadConfig};
use crate::rng::RngStream;

use super::sharded_runs;

/// Uniform λ bins used for continuous λ.
pub const SCREENING_BINS: usize = 64;

/// Bins with fewer samples are left out of the residual.
pub const MIN_BIN_OCCUPANCY: u64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScreeningReport {
    /// `max |P̂(A,B|bin) − P̂(A|bin) P̂(B|bin)|` over used bins and outcomes.
    pub residual: f64,
    /// Largest binomial error bound `4/√n` among the used bins.
    pub bound: f64,
    /// Largest ratio of a bin's residual to its own bound.
    pub worst_ratio: f64,
    pub bins_used: usize,
    /// Indices of bins with some but too few samples.
    pub excluded_bins: Vec<usize>,
}

impl ScreeningReport {
    pub fn consistent_with_zero(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct BinCounts([u64; 4]);

impl BinCounts {
    fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Bin trials by λ and compare each bin's joint outcome frequencies with
/// the product of its marginals.
///
/// Atom-valued models are binned by atom, continuous λ by `bins` uniform
/// bins over `[0, π)`, and models without λ use one bin.
pub fn screening_residual(
    model: &dyn BellModel,
    a: PolAngle,
    b: PolAngle,
    n: u64,
    bins: usize,
    rng: &RngStream,
) -> Result<ScreeningReport> {
    if bins == 0 {
        return Err(Error::invalid("need at least one λ bin"));
    }
    let atoms = match model.hidden_variables().map(|h| h.lambda_law(a, b)) {
        Some(LambdaLaw::Atoms(atoms)) => Some(atoms),
        _ => None,
    };
    let nbins = match (&atoms, model.hidden_variables()) {
        (Some(atoms), _) => atoms.len(),
        (None, Some(_)) => bins,
        (None, None) => 1,
    };
    let bin_of = |lambda: Option<PolAngle>| -> usize {
        match (lambda, &atoms) {
            (None, _) => 0,
            (Some(l), Some(atoms)) => atoms
                .iter()
                .enumerate()
                .min_by(|x, y| canonical_diff(l, x.1 .0).abs().total_cmp(&canonical_diff(l, y.1 .0).abs()))
                .map(|(i, _)| i)
                .unwrap_or(0),
            (Some(l), None) => ((l.radians() / PI * nbins as f64) as usize).min(nbins - 1),
        }
    };
    let counts: Vec<BinCounts> = sharded_runs(
        model,
        a,
        b,
        n,
        rng,
        |acc: &mut Vec<BinCounts>, run| {
            if acc.is_empty() {
                acc.resize(nbins, BinCounts::default());
            }
            acc[bin_of(run.lambda)].0[2 * run.a.index() + run.b.index()] += 1;
        },
        |mut x, y| {
            if x.is_empty() {
                return y;
            }
            for (p, q) in x.iter_mut().zip(&y) {
                for k in 0..4 {
                    p.0[k] += q.0[k];
                }
            }
            x
        },
    )?;

    let mut report = ScreeningReport {
        residual: 0.0,
        bound: 0.0,
        worst_ratio: 0.0,
        bins_used: 0,
        excluded_bins: Vec::new(),
    };
    for (i, c) in counts.iter().enumerate() {
        let total = c.total();
        if total == 0 {
            continue;
        }
        if total < MIN_BIN_OCCUPANCY {
            report.excluded_bins.push(i);
            continue;
        }
        let t = total as f64;
        let p = c.0.map(|k| k as f64 / t);
        let first = [p[0] + p[1], p[2] + p[3]];
        let second = [p[0] + p[2], p[1] + p[3]];
        let mut worst: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                worst = worst.max((p[2 * x + y] - first[x] * second[y]).abs());
            }
        }
        let bound = 4.0 / t.sqrt();
        report.residual = report.residual.max(worst);
        report.bound = report.bound.max(bound);
        report.worst_ratio = report.worst_ratio.max(worst / bound);
        report.bins_used += 1;
    }
    Ok(report)
}

/// Total-variation distance between the λ laws at two settings pairs.
///
/// Atoms are compared weight by weight, densities by quadrature of half
/// the absolute difference; an atom law and a density are mutually
/// singular and sit at distance 1.
pub fn lambda_independence_residual(
    model: &dyn BellModel,
    first: (PolAngle, PolAngle),
    second: (PolAngle, PolAngle),
) -> Result<f64> {
    let hv = model
        .hidden_variables()
        .ok_or_else(|| Error::invalid(format!("model {} has no hidden variable", model.name())))?;
    let p = hv.lambda_law(first.0, first.1);
    let q = hv.lambda_law(second.0, second.1);
    match (p, q) {
        (LambdaLaw::Atoms(p), LambdaLaw::Atoms(q)) => {
            let signed = p.into_iter().chain(q.into_iter().map(|(l, w)| (l, -w)));
            Ok(0.5 * merge_atoms(signed).iter().map(|(_, w)| w.abs()).sum::<f64>())
        }
        (
            LambdaLaw::Density {
                density: d1,
                breakpoints: b1,
            },
            LambdaLaw::Density {
                density: d2,
                breakpoints: b2,
            },
        ) => {
            let mut bps = b1;
            bps.extend(b2);
            bps.sort_by(f64::total_cmp);
            bps.dedup();
            let r = integrate(|l| 0.5 * (d1(l) - d2(l)).abs(), 0.0, PI, &bps, &QuadConfig::default())?;
            Ok(r.value)
        }
        _ => Ok(1.0),
    }
}
