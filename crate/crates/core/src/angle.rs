//! Polarization angles modulo π and binary measurement outcomes.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

/// A polarization direction or polarizer setting, defined modulo π.
///
/// The stored value is always the canonical representative in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct PolAngle(f64);

impl PolAngle {
    pub const ZERO: PolAngle = PolAngle(0.0);

    pub fn new(radians: f64) -> Self {
        let mut r = radians.rem_euclid(PI);
        // rem_euclid of a tiny negative number rounds up to π itself
        if r >= PI {
            r = 0.0;
        }
        PolAngle(r)
    }

    /// Angle given as a multiple of π, e.g. `from_pi_multiple(0.125)` is π/8.
    pub fn from_pi_multiple(k: f64) -> Self {
        PolAngle::new(k * PI)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// The orthogonal direction, `self + π/2`.
    pub fn perpendicular(self) -> Self {
        PolAngle::new(self.0 + FRAC_PI_2)
    }

    pub fn rotated(self, radians: f64) -> Self {
        PolAngle::new(self.0 + radians)
    }
}

impl From<PolAngle> for f64 {
    fn from(a: PolAngle) -> f64 {
        a.0
    }
}

impl From<f64> for PolAngle {
    fn from(x: f64) -> Self {
        PolAngle::new(x)
    }
}

impl fmt::Display for PolAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π", self.0 / PI)
    }
}

/// A binary measurement result: `Plus` is aligned with the setting,
/// `Minus` perpendicular to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn value(self) -> f64 {
        self.sign() as f64
    }

    pub fn from_sign(positive: bool) -> Self {
        if positive {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl std::ops::Mul for Outcome {
    type Output = Outcome;

    fn mul(self, rhs: Outcome) -> Outcome {
        Outcome::from_sign(self == rhs)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// Difference `x - y` modulo π, mapped into `[-π/2, π/2)`.
pub fn canonical_diff(x: PolAngle, y: PolAngle) -> f64 {
    let mut d = x.0 - y.0;
    if d >= FRAC_PI_2 {
        d -= PI;
    } else if d < -FRAC_PI_2 {
        d += PI;
    }
    d
}

/// Malus' law: probability that a photon polarized along `polarization`
/// registers `outcome` at a polarizer set to `setting`.
pub fn malus_prob(setting: PolAngle, polarization: PolAngle, outcome: Outcome) -> f64 {
    let d = canonical_diff(setting, polarization);
    let c = d.cos();
    let pass = c * c;
    match outcome {
        Outcome::Plus => pass,
        Outcome::Minus => 1.0 - pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_8;

    // Brute force over shifted representatives x - y + nπ.
    fn diff_oracle(x: f64, y: f64) -> f64 {
        (-4..=4)
            .map(|n| x - y + n as f64 * PI)
            .find(|d| (-FRAC_PI_2..FRAC_PI_2).contains(d))
            .unwrap()
    }

    #[test]
    fn construction_reduces_mod_pi() {
        assert_eq!(PolAngle::new(PI).radians(), 0.0);
        assert_eq!(PolAngle::new(-FRAC_PI_8).radians(), 7.0 * FRAC_PI_8);
        assert_eq!(PolAngle::new(-1e-18).radians(), 0.0);
        assert!((PolAngle::new(3.0 * PI + 0.25).radians() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn canonical_diff_examples() {
        let z = PolAngle::ZERO;
        let e = PolAngle::new(FRAC_PI_8);
        assert_eq!(canonical_diff(z, z), 0.0);
        assert_eq!(canonical_diff(e, z), FRAC_PI_8);
        assert_eq!(canonical_diff(z, e), -FRAC_PI_8);
        assert_eq!(canonical_diff(z, e), diff_oracle(0.0, FRAC_PI_8));
        // branch point maps to the lower end of the interval
        assert_eq!(canonical_diff(PolAngle::new(FRAC_PI_2), z), -FRAC_PI_2);
    }

    #[test]
    fn malus_examples() {
        let z = PolAngle::ZERO;
        assert_eq!(malus_prob(z, z, Outcome::Plus), 1.0);
        assert!((malus_prob(PolAngle::new(PI / 4.0), z, Outcome::Plus) - 0.5).abs() < 1e-15);
        let expected = 0.5 + 0.5 * (PI / 4.0).cos(); // cos²(π/8) = (1 + cos(π/4)) / 2
        assert!((malus_prob(PolAngle::new(FRAC_PI_8), z, Outcome::Plus) - expected).abs() < 1e-15);
        assert!((expected - 0.853553).abs() < 1e-6);
    }

    #[test]
    fn outcome_products() {
        assert_eq!(Outcome::Plus * Outcome::Minus, Outcome::Minus);
        assert_eq!(Outcome::Minus * Outcome::Minus, Outcome::Plus);
        assert_eq!(Outcome::Minus.value(), -1.0);
    }

    proptest! {
        #[test]
        fn canonical_diff_matches_oracle(x in 0.0..PI, y in 0.0..PI) {
            let d = canonical_diff(PolAngle::new(x), PolAngle::new(y));
            prop_assert!((-FRAC_PI_2..FRAC_PI_2).contains(&d));
            prop_assert!((d - diff_oracle(x, y)).abs() < 1e-12);
        }

        #[test]
        fn canonical_diff_antisymmetric(x in 0.0..PI, y in 0.0..PI) {
            let (px, py) = (PolAngle::new(x), PolAngle::new(y));
            let d = canonical_diff(px, py);
            prop_assume!(d != -FRAC_PI_2 && canonical_diff(py, px) != -FRAC_PI_2);
            prop_assert_eq!(d, -canonical_diff(py, px));
        }

        #[test]
        fn malus_complementary(s in -10.0..10.0f64, p in -10.0..10.0f64) {
            let (s, p) = (PolAngle::new(s), PolAngle::new(p));
            let total = malus_prob(s, p, Outcome::Plus) + malus_prob(s, p, Outcome::Minus);
            prop_assert!((total - 1.0).abs() <= f64::EPSILON);
        }

        #[test]
        fn malus_shift_invariant(s in 0.0..PI, p in 0.0..PI, n in -5i32..5) {
            let shift = n as f64 * PI;
            let base = malus_prob(PolAngle::new(s), PolAngle::new(p), Outcome::Plus);
            let shifted = malus_prob(PolAngle::new(s + shift), PolAngle::new(p + shift), Outcome::Plus);
            prop_assert!((base - shifted).abs() < 1e-12);
        }
    }
}
