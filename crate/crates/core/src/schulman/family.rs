//! Cauchy kick widths and sums over the family of equivalent net rotations
//! `Δθ + nπ`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Total Cauchy width γ of a kick path. Widths of independent kicks add.
///
/// A width of zero stands for the `γ → 0` limit and is only accepted by
/// the analytic routines.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct KickWidth(f64);

impl KickWidth {
    pub const LIMIT: KickWidth = KickWidth(0.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma >= 0.0 {
            Ok(KickWidth(gamma))
        } else {
            Err(Error::invalid(format!("kick width must be finite and non-negative, got {gamma}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_limit(self) -> bool {
        self.0 == 0.0
    }

    /// Width of each of `steps` equal kicks.
    pub fn per_step(self, steps: usize) -> f64 {
        self.0 / steps as f64
    }

    pub(crate) fn require_positive(self) -> Result<f64> {
        if self.0 > 0.0 {
            Ok(self.0)
        } else {
            Err(Error::invalid("this operation needs a strictly positive kick width"))
        }
    }
}

/// Truncation of the infinite sums over windings `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySumConfig {
    pub n_max: u32,
    /// Add the integral of the summand beyond `n_max` (midpoint rule).
    pub tail_correction: bool,
}

impl Default for FamilySumConfig {
    fn default() -> Self {
        FamilySumConfig {
            n_max: 10_000,
            tail_correction: true,
        }
    }
}

/// Reduce to `[-π/2, π/2)` modulo π.
pub(crate) fn reduce_half_turn(x: f64) -> f64 {
    let mut r = (x + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if r >= FRAC_PI_2 {
        r -= PI;
    }
    r
}

/// Cauchy density of the net rotation after kicks of total width γ.
pub fn net_rotation_density(dq: f64, gamma: KickWidth) -> f64 {
    let g = gamma.value();
    g / (PI * (dq * dq + g * g))
}

/// `Σₙ 1/(Δθ + nπ)² = 1/sin²(Δθ)`.
pub fn exact_family_sum(dtheta: f64) -> Result<f64> {
    let s = reduce_half_turn(dtheta).sin();
    if s == 0.0 {
        return Err(Error::Pole(dtheta));
    }
    Ok(1.0 / (s * s))
}

fn sum_symmetric<F: Fn(f64) -> f64>(x: f64, n_max: u32, term: F) -> f64 {
    // smallest terms first
    let mut acc = 0.0;
    for n in (1..=n_max).rev() {
        let shift = n as f64 * PI;
        acc += term(x + shift) + term(x - shift);
    }
    acc + term(x)
}

/// `Σ_{|n| ≤ n_max} 1/(Δθ + nπ)²`, plus the integral tail when enabled.
pub fn truncated_family_sum(dtheta: f64, cfg: &FamilySumConfig) -> Result<f64> {
    let x = reduce_half_turn(dtheta);
    if x == 0.0 {
        return Err(Error::Pole(dtheta));
    }
    let mut total = sum_symmetric(x, cfg.n_max, |y| 1.0 / (y * y));
    if cfg.tail_correction {
        let edge = (cfg.n_max as f64 + 0.5) * PI;
        total += 1.0 / (PI * (edge + x)) + 1.0 / (PI * (edge - x));
    }
    Ok(total)
}

/// Total Cauchy weight of the net rotations `x + nπ`, summed term by term.
pub fn family_weight_truncated(x: f64, gamma: KickWidth, cfg: &FamilySumConfig) -> f64 {
    let x = reduce_half_turn(x);
    let g = gamma.value();
    let mut total = sum_symmetric(x, cfg.n_max, |y| g / (PI * (y * y + g * g)));
    if cfg.tail_correction {
        let edge = (cfg.n_max as f64 + 0.5) * PI;
        total += ((g / (edge + x)).atan() + (g / (edge - x)).atan()) / (PI * PI);
    }
    total
}

/// Closed form of the same sum: the π-periodic wrapped Cauchy density
/// `sinh 2γ / (π (cosh 2γ − cos 2x))`, written to stay accurate for small γ.
pub fn family_weight(x: f64, gamma: f64) -> f64 {
    let sh = gamma.sinh();
    let sx = x.sin();
    (2.0 * gamma).sinh() / (2.0 * PI * (sh * sh + sx * sx))
}

/// Draw the winding `n` of the net rotation `x + nπ` with probability
/// proportional to its Cauchy weight. `x` must be in `[-π/2, π/2)`.
pub(crate) fn sample_winding(x: f64, gamma: f64, rng: &mut RngStream) -> i64 {
    const MAX_WINDINGS: i64 = 10_000_000;
    let weight = |n: i64| {
        let y = x + n as f64 * PI;
        gamma / (PI * (y * y + gamma * gamma))
    };
    let mut u = rng.uniform() * family_weight(x, gamma);
    let w0 = weight(0);
    if u < w0 {
        return 0;
    }
    u -= w0;
    // nearest copies first
    let toward = if x >= 0.0 { -1 } else { 1 };
    for k in 1..=MAX_WINDINGS {
        for n in [toward * k, -toward * k] {
            let w = weight(n);
            if u < w {
                return n;
            }
            u -= w;
        }
    }
    toward * MAX_WINDINGS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadConfig};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    // Brute-force partial sums with a much larger cutoff and no tail.
    fn brute_family_sum(x: f64, n: i64) -> f64 {
        let mut terms: Vec<f64> = (-n..=n).map(|k| 1.0 / (x + k as f64 * PI).powi(2)).collect();
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }

    #[test]
    fn density_examples() {
        let g = KickWidth::new(0.3).unwrap();
        assert!((net_rotation_density(0.0, g) - 1.0 / (PI * 0.3)).abs() < 1e-15);
        assert!((net_rotation_density(0.3, g) - 1.0 / (2.0 * PI * 0.3)).abs() < 1e-15);
    }

    #[test]
    fn density_integrates_to_one() {
        let g = KickWidth::new(1e-3).unwrap();
        let span = 1e6 * g.value();
        let r = integrate(|x| net_rotation_density(x, g), -span, span, &[0.0], &QuadConfig::default()).unwrap();
        // analytic mass outside the window: 1 − (2/π) atan(10⁶)
        let outside = 1.0 - 2.0 * (1e6f64).atan() / PI;
        assert!((r.value + outside - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_sum_examples() {
        assert!((exact_family_sum(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((exact_family_sum(FRAC_PI_4).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(exact_family_sum(0.0), Err(Error::Pole(_))));
        assert!(matches!(exact_family_sum(3.0 * PI), Err(Error::Pole(_))));
    }

    #[test]
    fn truncated_sum_with_tail_matches_closed_form() {
        let cfg = FamilySumConfig::default();
        for x in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2, 0.01, -1.2] {
            let t = truncated_family_sum(x, &cfg).unwrap();
            let e = exact_family_sum(x).unwrap();
            assert!((t - e).abs() < 1e-10, "x={x}: {t} vs {e}");
        }
    }

    #[test]
    fn tail_correction_beats_brute_force() {
        // a 10⁶-term brute-force sum still misses ~2/(π²·10⁶) of the tail
        let x = FRAC_PI_8;
        let brute = brute_family_sum(x, 1_000_000);
        let exact = exact_family_sum(x).unwrap();
        let missing = exact - brute;
        assert!(missing > 0.0 && (missing - 2.0 / (PI * PI * 1e6)).abs() < 1e-11);
        let no_tail = truncated_family_sum(x, &FamilySumConfig { n_max: 10_000, tail_correction: false }).unwrap();
        assert!((exact - no_tail - 2.0 / (PI * PI * (1e4 + 0.5))).abs() < 1e-11);
    }

    #[test]
    fn cauchy_family_routes_agree() {
        let cfg = FamilySumConfig::default();
        for g in [1e-4, 1e-3, 0.1, 1.0] {
            for x in [0.0, 0.2, FRAC_PI_4, -1.3, 1.5] {
                let t = family_weight_truncated(x, KickWidth::new(g).unwrap(), &cfg);
                let c = family_weight(x, g);
                assert!((t - c).abs() <= 1e-10 * c.max(1.0), "g={g} x={x}: {t} vs {c}");
            }
        }
    }

    #[test]
    fn reduce_half_turn_range() {
        for k in -20..20 {
            let r = reduce_half_turn(k as f64 * 0.37);
            assert!((-FRAC_PI_2..FRAC_PI_2).contains(&r));
        }
        assert_eq!(reduce_half_turn(FRAC_PI_2), -FRAC_PI_2);
    }

    #[test]
    fn winding_frequencies_follow_weights() {
        let (x, g) = (0.4, 0.5);
        let mut rng = RngStream::new(11, 0);
        let n = 200_000;
        let mut hits = std::collections::BTreeMap::new();
        for _ in 0..n {
            *hits.entry(sample_winding(x, g, &mut rng)).or_insert(0usize) += 1;
        }
        let total = family_weight(x, g);
        for k in -2i64..=2 {
            let y = x + k as f64 * PI;
            let p = g / (PI * (y * y + g * g)) / total;
            let f = *hits.get(&k).unwrap_or(&0) as f64 / n as f64;
            assert!((f - p).abs() < 5.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-4, "k={k}: {f} vs {p}");
        }
    }
}
