//! Quantum predictions for the Bell state and the CHSH value over a grid
//! of settings.

use std::f64::consts::PI;

use belllab::qm::qm_chsh;
use belllab::{qm_correlator, qm_joint, tsirelson_settings, ChshSettings, Outcome, PolAngle};

fn main() {
    let (a, b) = (PolAngle::ZERO, PolAngle::from_pi_multiple(0.125));
    let joint = qm_joint(a, b);
    println!("settings a = {a}, b = {b}");
    for x in Outcome::BOTH {
        for y in Outcome::BOTH {
            println!("  P({x}, {y}) = {:.6}", joint.get(x, y));
        }
    }
    println!("  <AB> = {:.6}", qm_correlator(a, b));

    let s = tsirelson_settings();
    println!("S at ({}, {}, {}, {}) = {:.12}", s.a, s.a_prime, s.b, s.b_prime, qm_chsh(&s));

    // coarse search: nothing beats the Tsirelson point
    let k = 24;
    let angle = |i: usize| PolAngle::new(i as f64 * PI / k as f64);
    let mut best = (0.0, tsirelson_settings());
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let trial = ChshSettings::new(PolAngle::ZERO, angle(i), angle(j), angle(l));
                let v = qm_chsh(&trial);
                if v > best.0 {
                    best = (v, trial);
                }
            }
        }
    }
    println!("best S on a {k}³ grid = {:.12} (2√2 = {:.12})", best.0, 2.0 * 2f64.sqrt());
}
