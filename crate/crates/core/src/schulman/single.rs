//! One photon between polarizers.

use std::f64::consts::FRAC_PI_2;

use crate::angle::{canonical_diff, Outcome, PolAngle};
use crate::error::Result;

use super::family::{family_weight_truncated, FamilySumConfig, KickWidth};

/// Probability that a photon prepared at `theta1` ends aligned with a
/// polarizer at `theta2`.
///
/// The aligned family `θ₂ − θ₁ + nπ` and the perpendicular family
/// `θ₂ + π/2 − θ₁ + nπ` are weighted by the Cauchy net-rotation density and
/// normalized against each other. In the `γ → 0` limit the ratio of the
/// two family sums `1/sin²` and `1/cos²` is Malus' law, evaluated directly.
pub fn single_photon_outcome_prob(
    theta1: PolAngle,
    theta2: PolAngle,
    gamma: KickWidth,
    cfg: &FamilySumConfig,
) -> f64 {
    let d = canonical_diff(theta2, theta1);
    if gamma.is_limit() {
        let c = d.cos();
        return c * c;
    }
    let aligned = family_weight_truncated(d, gamma, cfg);
    let perpendicular = family_weight_truncated(d + FRAC_PI_2, gamma, cfg);
    aligned / (aligned + perpendicular)
}

/// Outcome sequences for one photon passing polarizers `angles[1..]` after
/// preparation at `angles[0]`.
///
/// Each measurement's realized polarization (the setting for `+`, the
/// setting plus π/2 for `-`) is the starting boundary of the next segment.
/// Sequences are listed in lexicographic order with `+` first.
pub fn sequential_outcome_probs(
    angles: &[PolAngle],
    gamma: KickWidth,
) -> Result<Vec<(Vec<Outcome>, f64)>> {
    if angles.len() < 2 {
        return Err(crate::Error::invalid("need a preparation angle and at least one measurement"));
    }
    let cfg = FamilySumConfig::default();
    let mut partial: Vec<(Vec<Outcome>, PolAngle, f64)> = vec![(Vec::new(), angles[0], 1.0)];
    for &setting in &angles[1..] {
        let mut next = Vec::with_capacity(partial.len() * 2);
        for (seq, from, p) in partial {
            let pass = single_photon_outcome_prob(from, setting, gamma, &cfg);
            for o in Outcome::BOTH {
                let (realized, q) = match o {
                    Outcome::Plus => (setting, pass),
                    Outcome::Minus => (setting.perpendicular(), 1.0 - pass),
                };
                let mut s = seq.clone();
                s.push(o);
                next.push((s, realized, p * q));
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|(s, _, p)| (s, p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schulman::family::family_weight;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn limit_examples() {
        let cfg = FamilySumConfig::default();
        let z = PolAngle::ZERO;
        assert_eq!(single_photon_outcome_prob(z, z, KickWidth::LIMIT, &cfg), 1.0);
        let p = single_photon_outcome_prob(z, PolAngle::new(FRAC_PI_4), KickWidth::LIMIT, &cfg);
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn small_width_recovers_malus() {
        let cfg = FamilySumConfig::default();
        let g = KickWidth::new(1e-4).unwrap();
        let p = single_photon_outcome_prob(PolAngle::ZERO, PolAngle::new(FRAC_PI_8), g, &cfg);
        // oracle: the two family sums 1/sin² and 1/cos², normalized
        let s2 = FRAC_PI_8.sin().powi(2);
        let c2 = FRAC_PI_8.cos().powi(2);
        let oracle = (1.0 / s2) / (1.0 / s2 + 1.0 / c2);
        assert!((p - oracle).abs() < 1e-3);
        assert!((p - 0.853553).abs() < 1e-3);
    }

    #[test]
    fn finite_width_matches_wrapped_cauchy_closed_form() {
        let cfg = FamilySumConfig::default();
        for g in [1e-3, 0.05, 0.4] {
            for d in [0.1, 0.7, 1.3] {
                let p = single_photon_outcome_prob(PolAngle::ZERO, PolAngle::new(d), KickWidth::new(g).unwrap(), &cfg);
                let w1 = family_weight(d, g);
                let w2 = family_weight(d + FRAC_PI_2, g);
                assert!((p - w1 / (w1 + w2)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn convergence_to_malus_is_monotone() {
        let cfg = FamilySumConfig::default();
        for d in [0.2f64, 0.6, 1.0, 1.4] {
            let target = d.cos().powi(2);
            let mut last = f64::INFINITY;
            for g in [0.5, 0.2, 0.05, 0.01, 1e-3] {
                let p = single_photon_outcome_prob(PolAngle::ZERO, PolAngle::new(d), KickWidth::new(g).unwrap(), &cfg);
                let err = (p - target).abs();
                assert!(err < last, "d={d} g={g}");
                last = err;
            }
        }
    }

    #[test]
    fn sequential_examples() {
        let z = PolAngle::ZERO;
        let e = PolAngle::new(FRAC_PI_8);
        let probs = sequential_outcome_probs(&[z, e, e], KickWidth::LIMIT).unwrap();
        let pp = probs.iter().find(|(s, _)| s == &vec![Outcome::Plus, Outcome::Plus]).unwrap().1;
        assert!((pp - FRAC_PI_8.cos().powi(2)).abs() < 1e-15);
        assert!((pp - 0.853553).abs() < 1e-6);

        let probs = sequential_outcome_probs(&[z, PolAngle::new(FRAC_PI_4), z], KickWidth::LIMIT).unwrap();
        let pp = probs.iter().find(|(s, _)| s == &vec![Outcome::Plus, Outcome::Plus]).unwrap().1;
        assert!((pp - 0.25).abs() < 1e-15);
        let total: f64 = probs.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_polarizer_sequence_reduces_to_single() {
        let g = KickWidth::new(0.01).unwrap();
        let x = PolAngle::new(0.9);
        let probs = sequential_outcome_probs(&[PolAngle::ZERO, x], g).unwrap();
        let single = single_photon_outcome_prob(PolAngle::ZERO, x, g, &FamilySumConfig::default());
        assert_eq!(probs.len(), 2);
        assert_eq!(probs[0].1, single);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn limit_branch_is_complementary(t1 in 0.0..PI, t2 in 0.0..PI) {
            let cfg = FamilySumConfig::default();
            let (a, b) = (PolAngle::new(t1), PolAngle::new(t2));
            let p = single_photon_outcome_prob(a, b, KickWidth::LIMIT, &cfg)
                + single_photon_outcome_prob(a, b.perpendicular(), KickWidth::LIMIT, &cfg);
            prop_assert!((p - 1.0).abs() < 1e-15);
        }
    }
}
