//! Kick paths conditioned on both boundaries ("Cauchy bridges").
//!
//! A path of `N` equal steps has independent Cauchy(γ/N) increments; by
//! stability the net rotation is Cauchy(γ). Conditioning on the endpoint is
//! done sequentially: with `m` steps left and rotation `R` still to cover,
//! the next increment has density proportional to
//!
//! ```text
//! C_s(x) · C_{(m-1)s}(R − x),      s = γ/N,
//! ```
//!
//! which is sampled exactly by rejection from the two-component proposal
//! `½ C_s(x) + ½ C_{(m-1)s}(R − x)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{canonical_diff, PolAngle};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::{cauchy_cdf, chi_square_uniform, ks_test, TestStatistic};

use super::family::{family_weight, sample_winding, KickWidth};

/// Proposal budget for a single conditioned increment.
pub const RETRY_BUDGET: u64 = 1_000_000;

/// Increments smaller than this fraction of γ do not count as kicks.
pub const DOMINANCE_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub steps: usize,
    pub gamma: KickWidth,
    pub theta1: PolAngle,
    /// Final polarizer; the path ends on `θ₂` or `θ₂ + π/2` modulo π.
    pub theta2: PolAngle,
}

impl PathSpec {
    pub fn new(steps: usize, gamma: KickWidth, theta1: PolAngle, theta2: PolAngle) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("a path needs at least one step"));
        }
        gamma.require_positive()?;
        Ok(PathSpec {
            steps,
            gamma,
            theta1,
            theta2,
        })
    }
}

/// Unwrapped polarization history `q₀ … q_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationPath {
    points: Vec<f64>,
    gamma: f64,
}

impl PolarizationPath {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn net_rotation(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn increments(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

fn lorentz(x: f64, w: f64) -> f64 {
    w / (x * x + w * w)
}

/// `sup_x min(C_s(x), C_t(r − x))` up to the common 1/π factor.
fn envelope(s: f64, t: f64, r: f64) -> f64 {
    // crossings solve (s − t)x² − 2sr·x + s r² + s t (t − s) = 0
    let qa = s - t;
    let qc = s * r * r + s * t * (t - s);
    let root = (s * t * (r * r + (s - t) * (s - t))).sqrt();
    let q = s * r + if r >= 0.0 { root } else { -root };
    let mut candidates = vec![0.0, r];
    if q != 0.0 {
        candidates.push(qc / q);
    }
    if qa != 0.0 {
        candidates.push(q / qa);
    }
    if qa == 0.0 {
        candidates.push(0.5 * r);
    }
    candidates
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| lorentz(x, s).min(lorentz(r - x, t)))
        .fold(0.0, f64::max)
}

/// Draw `x` with density proportional to `C_s(x) · C_t(r − x)`.
///
/// Returns the number of proposals on failure.
pub(crate) fn sample_cauchy_product(
    s: f64,
    t: f64,
    r: f64,
    rng: &mut RngStream,
    budget: u64,
) -> std::result::Result<f64, u64> {
    let bound = envelope(s, t, r) * (1.0 + 1e-9);
    for _ in 0..budget {
        let x = if rng.bernoulli(0.5) {
            rng.cauchy(s)
        } else {
            r + rng.cauchy(t)
        };
        let (ls, lt) = (lorentz(x, s), lorentz(r - x, t));
        let ratio = ls * lt / (ls + lt);
        if rng.uniform() * bound <= ratio {
            return Ok(x);
        }
    }
    Err(budget)
}

/// Increments of `steps` Cauchy(γ/steps) kicks conditioned to carry the path
/// from `start` to exactly `target`.
pub fn sample_conditioned_path(
    start: f64,
    target: f64,
    steps: usize,
    gamma: f64,
    rng: &mut RngStream,
) -> Result<PolarizationPath> {
    let s = gamma / steps as f64;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(start);
    let mut q = start;
    for k in 0..steps.saturating_sub(1) {
        let remaining = target - q;
        let rest = (steps - k - 1) as f64 * s;
        let x = sample_cauchy_product(s, rest, remaining, rng, RETRY_BUDGET).map_err(|tries| Error::Bridge {
            step: k,
            steps,
            tries,
            remaining,
        })?;
        q += x;
        points.push(q);
    }
    points.push(target);
    Ok(PolarizationPath { points, gamma })
}

/// Draw the endpoint family (aligned or perpendicular) and winding, then a
/// path conditioned on that endpoint.
pub fn sample_bridge(spec: &PathSpec, rng: &mut RngStream) -> Result<PolarizationPath> {
    let g = spec.gamma.require_positive()?;
    let aligned = canonical_diff(spec.theta2, spec.theta1);
    let perpendicular = canonical_diff(spec.theta2.perpendicular(), spec.theta1);
    let (wa, wp) = (family_weight(aligned, g), family_weight(perpendicular, g));
    let base = if rng.uniform() * (wa + wp) < wa {
        aligned
    } else {
        perpendicular
    };
    let n = sample_winding(base, g, rng);
    let dq = base + n as f64 * std::f64::consts::PI;
    let start = spec.theta1.radians();
    sample_conditioned_path(start, start + dq, spec.steps, g, rng)
}

/// Per-path kick summary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub steps: usize,
    pub net_rotation: f64,
    /// Index of the largest increment, if it clears the kick floor.
    pub kick_index: Option<usize>,
    /// Largest |increment| over the sum of |increments| at or above the floor.
    pub dominance: Option<f64>,
    /// Largest |increment| over |net rotation|.
    pub net_fraction: Option<f64>,
}

impl PathSummary {
    pub fn of(path: &PolarizationPath) -> Self {
        let floor = DOMINANCE_FLOOR * path.gamma();
        let inc = path.increments();
        let (idx, big) = inc
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.abs()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let net = path.net_rotation();
        if big < floor {
            return PathSummary {
                steps: inc.len(),
                net_rotation: net,
                kick_index: None,
                dominance: None,
                net_fraction: None,
            };
        }
        let counted: f64 = inc.iter().map(|x| x.abs()).filter(|&x| x >= floor).sum();
        PathSummary {
            steps: inc.len(),
            net_rotation: net,
            kick_index: Some(idx),
            dominance: Some(big / counted),
            net_fraction: (net.abs() >= floor).then(|| big / net.abs()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KickStats {
    pub paths: usize,
    /// Paths whose largest increment is below the kick floor.
    pub undefined: usize,
    /// Counts of the step index carrying the largest kick.
    pub kick_time_histogram: Vec<u64>,
    pub dominance: Vec<f64>,
    pub net_fraction: Vec<f64>,
}

impl KickStats {
    pub fn from_summaries(summaries: &[PathSummary]) -> Self {
        let bins = summaries.iter().map(|s| s.steps).max().unwrap_or(0);
        let mut hist = vec![0u64; bins];
        for k in summaries.iter().filter_map(|s| s.kick_index) {
            hist[k] += 1;
        }
        KickStats {
            paths: summaries.len(),
            undefined: summaries.iter().filter(|s| s.kick_index.is_none()).count(),
            kick_time_histogram: hist,
            dominance: summaries.iter().filter_map(|s| s.dominance).collect(),
            net_fraction: summaries.iter().filter_map(|s| s.net_fraction).collect(),
        }
    }

    /// Share of all paths whose largest kick exceeds `threshold` of the
    /// summed kick magnitudes.
    pub fn dominant_share(&self, threshold: f64) -> f64 {
        self.dominance.iter().filter(|&&d| d > threshold).count() as f64 / self.paths as f64
    }

    /// Share of all paths whose largest kick exceeds `threshold` of |Δq|.
    pub fn net_dominant_share(&self, threshold: f64) -> f64 {
        self.net_fraction.iter().filter(|&&d| d > threshold).count() as f64 / self.paths as f64
    }

    pub fn kick_time_uniformity(&self) -> TestStatistic {
        chi_square_uniform(&self.kick_time_histogram)
    }
}

/// Kick-time histogram and dominance distribution of a set of paths.
pub fn dominant_kick_stats(paths: &[PolarizationPath]) -> KickStats {
    let summaries: Vec<PathSummary> = paths.iter().map(PathSummary::of).collect();
    KickStats::from_summaries(&summaries)
}

/// Sample `count` bridges (path `i` on `rng.split(i)`) and summarize them
/// without keeping the paths. Endpoint exactness is checked per path.
pub fn bridge_ensemble(spec: &PathSpec, count: usize, rng: &RngStream) -> Result<(KickStats, bool)> {
    let results: Vec<Result<(PathSummary, bool)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            let path = sample_bridge(spec, &mut r)?;
            let exact = endpoint_is_exact(spec, &path);
            Ok((PathSummary::of(&path), exact))
        })
        .collect();
    let mut summaries = Vec::with_capacity(count);
    let mut all_exact = true;
    for r in results {
        let (s, e) = r?;
        summaries.push(s);
        all_exact &= e;
    }
    Ok((KickStats::from_summaries(&summaries), all_exact))
}

/// Start is θ₁ bit-for-bit and the end lies on the θ₂ family modulo π/2.
pub fn endpoint_is_exact(spec: &PathSpec, path: &PolarizationPath) -> bool {
    if path.start() != spec.theta1.radians() {
        return false;
    }
    let end = PolAngle::new(path.end());
    let off = canonical_diff(end, spec.theta2);
    let tol = 8.0 * f64::EPSILON * path.end().abs().max(1.0);
    off.abs() <= tol || (off.abs() - std::f64::consts::FRAC_PI_2).abs() <= tol
}

/// KS test that the sum of `steps` Cauchy(γ/steps) kicks is Cauchy(γ).
pub fn cauchy_stability_test(steps: usize, gamma: f64, samples: usize, rng: &RngStream) -> TestStatistic {
    let s = gamma / steps as f64;
    let sums: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            (0..steps).map(|_| r.cauchy(s)).sum()
        })
        .collect();
    ks_test(&sums, |x| cauchy_cdf(x, gamma))
}

/// Bridges with endpoints drawn from the free Cauchy(γ) law must reproduce
/// the free process: KS tests of the net rotation against Cauchy(γ) and of
/// the first and middle increments against Cauchy(γ/steps).
pub fn bridge_consistency_test(
    steps: usize,
    gamma: f64,
    samples: usize,
    rng: &RngStream,
) -> Result<[TestStatistic; 3]> {
    let draws: Vec<Result<(f64, f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            let target = r.cauchy(gamma);
            let p = sample_conditioned_path(0.0, target, steps, gamma, &mut r)?;
            let inc = p.increments();
            Ok((p.net_rotation(), inc[0], inc[steps / 2]))
        })
        .collect();
    let mut net = Vec::with_capacity(samples);
    let mut first = Vec::with_capacity(samples);
    let mut middle = Vec::with_capacity(samples);
    for d in draws {
        let (n, f, m) = d?;
        net.push(n);
        first.push(f);
        middle.push(m);
    }
    let s = gamma / steps as f64;
    Ok([
        ks_test(&net, |x| cauchy_cdf(x, gamma)),
        ks_test(&first, |x| cauchy_cdf(x, s)),
        ks_test(&middle, |x| cauchy_cdf(x, s)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadConfig};
    use std::f64::consts::{FRAC_PI_8, PI};

    #[test]
    fn envelope_bounds_the_ratio() {
        for &(s, t, r) in &[(1e-5, 9.9e-4, 0.39), (1e-3, 1e-3, 0.0), (0.2, 0.05, -1.3), (1.0, 1.0, 2.0), (1e-5, 1e-5, 5e-6)] {
            let m = envelope(s, t, r);
            for i in 0..20_001 {
                let x = r * (i as f64 / 10_000.0 - 0.5) * 3.0 + (i as f64 - 10_000.0) * 1e-7;
                assert!(lorentz(x, s).min(lorentz(r - x, t)) <= m * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn product_sampler_matches_its_density() {
        let (s, t, r) = (0.05, 0.3, 1.0);
        let mut rng = RngStream::new(4, 0);
        let xs: Vec<f64> = (0..50_000)
            .map(|_| sample_cauchy_product(s, t, r, &mut rng, RETRY_BUDGET).unwrap())
            .collect();
        // oracle: numerical CDF of the normalized product density
        let f = |x: f64| lorentz(x, s) * lorentz(r - x, t);
        let cfg = QuadConfig { abs_tol: 1e-12, ..QuadConfig::default() };
        let norm = integrate(f, -200.0, 200.0, &[0.0, r], &cfg).unwrap().value;
        let cdf = |x: f64| {
            let x = x.clamp(-200.0, 200.0);
            integrate(f, -200.0, x, &[0.0, r], &cfg).unwrap().value / norm
        };
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let sub: Vec<f64> = sorted.iter().step_by(25).copied().collect();
        let t = ks_test(&sub, cdf);
        assert!(t.p_value > 0.001, "{t:?}");
    }

    #[test]
    fn single_step_path_is_forced() {
        let spec = PathSpec::new(1, KickWidth::new(1e-3).unwrap(), PolAngle::ZERO, PolAngle::new(FRAC_PI_8)).unwrap();
        let mut rng = RngStream::new(1, 1);
        for _ in 0..100 {
            let p = sample_bridge(&spec, &mut rng).unwrap();
            assert_eq!(p.increments().len(), 1);
            assert_eq!(p.increments()[0], p.net_rotation());
            assert!(endpoint_is_exact(&spec, &p));
        }
    }

    #[test]
    fn endpoints_are_exact() {
        let spec = PathSpec::new(50, KickWidth::new(1e-2).unwrap(), PolAngle::new(0.3), PolAngle::new(2.0)).unwrap();
        let mut rng = RngStream::new(2, 0);
        for _ in 0..200 {
            let p = sample_bridge(&spec, &mut rng).unwrap();
            assert_eq!(p.start(), 0.3);
            assert!(endpoint_is_exact(&spec, &p));
            let off = canonical_diff(PolAngle::new(p.end()), spec.theta2).abs();
            assert!(off < 1e-12 || (off - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_step_histogram_has_one_bin() {
        let spec = PathSpec::new(1, KickWidth::new(1e-3).unwrap(), PolAngle::ZERO, PolAngle::new(0.5)).unwrap();
        let (stats, exact) = bridge_ensemble(&spec, 500, &RngStream::new(0, 0)).unwrap();
        assert!(exact);
        assert_eq!(stats.kick_time_histogram, vec![500]);
    }

    #[test]
    fn aligned_boundaries_have_no_collapse_kick() {
        let spec = PathSpec::new(100, KickWidth::new(1e-3).unwrap(), PolAngle::new(0.2), PolAngle::new(0.2)).unwrap();
        let (stats, _) = bridge_ensemble(&spec, 2000, &RngStream::new(3, 0)).unwrap();
        // most endpoints are Δq = 0: no kick carries the path anywhere
        assert!(stats.net_fraction.len() < stats.paths / 10);
        assert!(stats.dominant_share(0.99) < 0.2);
    }

    #[test]
    fn ensemble_does_not_depend_on_thread_count() {
        let spec = PathSpec::new(20, KickWidth::new(1e-3).unwrap(), PolAngle::ZERO, PolAngle::new(0.4)).unwrap();
        let rng = RngStream::new(77, 0);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| bridge_ensemble(&spec, 300, &rng).unwrap());
        let b = three.install(|| bridge_ensemble(&spec, 300, &rng).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn stable_sums_pass_ks() {
        let t = cauchy_stability_test(100, 1e-3, 20_000, &RngStream::new(5, 0));
        assert!(t.p_value > 0.01, "{t:?}");
    }

    #[test]
    fn bridges_marginalize_to_free_process() {
        let [net, first, middle] = bridge_consistency_test(20, 1e-2, 20_000, &RngStream::new(6, 0)).unwrap();
        assert!(net.p_value > 0.01, "{net:?}");
        assert!(first.p_value > 0.01, "{first:?}");
        assert!(middle.p_value > 0.01, "{middle:?}");
    }
}
