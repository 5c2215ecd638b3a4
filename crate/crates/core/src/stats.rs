//! Goodness-of-fit helpers used by the path-statistics checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestStatistic {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution, `P(K > x)`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // small-argument (theta function) form
        let y = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (m * m * y).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as i64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * x * x).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
///
/// The p-value uses the asymptotic distribution with Stephens' finite-sample
/// correction.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> TestStatistic {
    let n = samples.len();
    if n == 0 {
        return TestStatistic {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
        })
        .fold(0.0, f64::max);
    let sq = nf.sqrt();
    TestStatistic {
        statistic: d,
        p_value: kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d),
    }
}

/// Pearson χ² test of observed bin counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> TestStatistic {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    if k < 2 || total == 0 {
        return TestStatistic {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    TestStatistic {
        statistic: stat,
        p_value: dist.sf(stat),
    }
}

/// Cauchy CDF with location 0.
pub fn cauchy_cdf(x: f64, scale: f64) -> f64 {
    0.5 + (x / scale).atan() / std::f64::consts::PI
}
