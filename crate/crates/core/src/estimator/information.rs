//! How much the Hall λ distribution reveals about the settings.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::PolAngle;
use crate::error::{Error, Result};
use crate::models::hall_density;

/// Largest accepted change between the fine and the halved grids, in bits.
pub const REFINEMENT_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MIEstimate {
    pub bits: f64,
    /// `|bits − coarse_bits|`.
    pub error_estimate: f64,
    /// Estimate with both grids halved.
    pub coarse_bits: f64,
    pub lambda_grid: usize,
    pub settings_grid: usize,
}

fn settings(k: usize) -> impl Iterator<Item = (PolAngle, PolAngle)> + Clone {
    let h = PI / k as f64;
    (0..k).flat_map(move |i| (0..k).map(move |j| (PolAngle::new(i as f64 * h), PolAngle::new(j as f64 * h))))
}

/// Cell edges in `[0, π]`: a uniform grid of `m` cells refined by every
/// sign-change point `s ± π/4` of the settings grid.
fn cells(m: usize, k: usize) -> Vec<f64> {
    let mut edges: Vec<f64> = (0..=m).map(|i| i as f64 * PI / m as f64).collect();
    for i in 0..k {
        let s = PolAngle::new(i as f64 * PI / k as f64);
        edges.push(s.rotated(PI / 4.0).radians());
        edges.push(s.rotated(-PI / 4.0).radians());
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    edges
}

/// `p̄(λ) = (1/K²) Σ_{a,b} P_{a,b}(λ)` over the `k × k` settings grid.
pub fn averaged_hall_density(k: usize, lambda: PolAngle) -> f64 {
    settings(k).map(|(a, b)| hall_density(a, b, lambda)).sum::<f64>() / (k * k) as f64
}

/// `(1/K²) Σ_{a,b} ∫ P_{a,b}(λ) log₂[P_{a,b}(λ)/p̄(λ)] dλ` with a uniform
/// settings grid. Every density is constant on each cell, so the
/// midpoint rule is exact in λ; only the settings average is discretized.
pub fn hall_information(m: usize, k: usize) -> f64 {
    let edges = cells(m, k);
    let grid: Vec<(PolAngle, PolAngle)> = settings(k).collect();
    let mut total = 0.0;
    let mut values = vec![0.0; grid.len()];
    for w in edges.windows(2) {
        let width = w[1] - w[0];
        let lambda = PolAngle::new(0.5 * (w[0] + w[1]));
        for (v, &(a, b)) in values.iter_mut().zip(&grid) {
            *v = hall_density(a, b, lambda);
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        if mean <= 0.0 {
            continue;
        }
        let cell: f64 = values.iter().filter(|&&p| p > 0.0).map(|&p| p * (p / mean).log2()).sum();
        total += cell * width;
    }
    total / grid.len() as f64
}

/// [`hall_information`] on an `m`-cell λ grid and `k × k` settings grid,
/// checked against the same computation with both grids halved.
pub fn mutual_information_hall(m: usize, k: usize) -> Result<MIEstimate> {
    if m < 512 || k < 64 {
        return Err(Error::invalid(format!("need λ grid ≥ 512 and settings grid ≥ 64, got {m} and {k}")));
    }
    let fine = hall_information(m, k);
    let coarse = hall_information(m / 2, k / 2);
    if (fine - coarse).abs() > REFINEMENT_TOLERANCE {
        return Err(Error::MutualInfo { fine, coarse });
    }
    Ok(MIEstimate {
        bits: fine,
        error_estimate: (fine - coarse).abs(),
        coarse_bits: coarse,
        lambda_grid: m,
        settings_grid: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::hall_breakpoints;
    use crate::quad::{integrate, QuadConfig};

    #[test]
    fn below_bound_and_stable() {
        let mi = mutual_information_hall(512, 64).unwrap();
        assert!(mi.bits > 0.0 && mi.bits < 0.07, "{mi:?}");
        assert!(mi.error_estimate < REFINEMENT_TOLERANCE);
    }

    #[test]
    fn averaged_density_is_flat() {
        for l in [0.0, 0.3, 1.0, 2.2, 3.1] {
            let p = averaged_hall_density(64, PolAngle::new(l));
            assert!((p - 1.0 / PI).abs() < 1e-2 / PI, "λ={l}: {p}");
        }
    }

    #[test]
    fn cell_midpoints_agree_with_adaptive_quadrature() {
        // one settings pair: ∫ P log₂(P π) against the generic integrator
        let (a, b) = (PolAngle::new(0.0), PolAngle::new(3.0 * PI / 64.0));
        let f = |l: f64| {
            let p = hall_density(a, b, PolAngle::new(l));
            if p > 0.0 {
                p * (p * PI).log2()
            } else {
                0.0
            }
        };
        let exact = integrate(f, 0.0, PI, &hall_breakpoints(a, b), &QuadConfig::default()).unwrap().value;
        let edges = cells(512, 64);
        let mid: f64 = edges.windows(2).map(|w| f(0.5 * (w[0] + w[1])) * (w[1] - w[0])).sum();
        assert!((exact - mid).abs() < 1e-12);
    }

    #[test]
    fn small_grids_are_refused() {
        assert!(mutual_information_hall(256, 64).is_err());
        assert!(mutual_information_hall(512, 32).is_err());
    }
}
