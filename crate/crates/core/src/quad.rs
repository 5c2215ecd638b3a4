//! Globally adaptive Gauss–Kronrod (7/15 point) quadrature with
//! user-supplied breakpoints.
//!
//! The integrands in this crate are piecewise smooth with jumps or sharp
//! peaks at analytically known angles, so every integral is first split at
//! those angles and then refined by bisecting the subinterval with the
//! largest error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_subdivisions: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subintervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let err = (res_k - res_g) * half;
    Segment {
        lo,
        hi,
        value,
        error: rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    }
}

/// Integrate `f` over `[lo, hi]`, splitting first at every breakpoint that
/// lies strictly inside the interval.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::invalid(format!("bad integration interval [{lo}, {hi}]")));
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod15(&f, w[0], w[1]));
        }
    }

    let totals = |heap: &BinaryHeap<Segment>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };

    loop {
        let (value, error) = totals(&heap);
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol {
            return Ok(QuadResult {
                value,
                error,
                subintervals: heap.len(),
            });
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval cannot be bisected any further in f64
            return Err(Error::Quadrature {
                estimate: value,
                error_estimate: error,
            });
        }
        heap.push(kronrod15(&f, worst.lo, mid));
        heap.push(kronrod15(&f, mid, worst.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, &[], &QuadConfig::default()).unwrap();
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn step_function_with_breakpoint() {
        let f = |x: f64| if x < 1.0 { 3.0 } else { -1.0 };
        let r = integrate(f, 0.0, 3.0, &[1.0], &QuadConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert_eq!(r.subintervals, 2);
    }

    #[test]
    fn narrow_cauchy_peak_at_breakpoint() {
        let g = 1e-4;
        let f = |x: f64| g / PI / ((x - 1.0) * (x - 1.0) + g * g);
        let r = integrate(f, 0.0, 2.0, &[1.0], &QuadConfig::default()).unwrap();
        let exact = 2.0 * (1.0 / g).atan() / PI;
        assert!((r.value - exact).abs() < 1e-10, "{} vs {}", r.value, exact);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadConfig {
            max_subdivisions: 4,
            ..QuadConfig::default()
        };
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &[], &cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
