//! The experiments behind each subcommand.

use std::f64::consts::PI;

use crate::angle::{Outcome, PolAngle};
use crate::error::{Error, Result};
use crate::estimator::{
    chsh_pvalue, chsh_value, estimate_chsh, lambda_independence_residual, mutual_information_hall,
    screening_residual, sharded_runs, SCREENING_BINS,
};
use crate::models::{BellModel, DeltaMixtureModel, HallModel, LocalBaselineModel, PrBoxModel};
use crate::qm::{qm_chsh, qm_correlator, qm_joint, QuantumModel};
use crate::rng::RngStream;
use crate::schulman::{
    bridge_ensemble, cauchy_stability_test, default_grid, two_photon_joint, KickWidth, PathSpec, SchulmanPairModel,
};

use super::config::{ExperimentConfig, ModelId};
use super::report::{
    ChshResults, MutualInfoResults, PathResults, Report, Results, ScanResults, ScanRow, TwoPhotonPair,
    TwoPhotonResults,
};

fn report(command: &str, config: &ExperimentConfig, results: Results) -> Report {
    Report {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        results,
    }
}

fn gamma(config: &ExperimentConfig) -> Result<KickWidth> {
    let g = config
        .gamma
        .ok_or_else(|| Error::Usage(format!("model {} needs --gamma", config.model.as_str())))?;
    KickWidth::new(g)
}

/// The sampling model for `config`, if the model has one.
pub fn build_model(config: &ExperimentConfig) -> Result<Box<dyn BellModel>> {
    Ok(match config.model {
        ModelId::DeltaMixture => Box::new(DeltaMixtureModel),
        ModelId::Hall => Box::new(HallModel),
        ModelId::LocalBaseline => Box::new(LocalBaselineModel),
        ModelId::PrBox => Box::new(PrBoxModel::new(config.settings)),
        ModelId::Schulman2 => Box::new(SchulmanPairModel::new(gamma(config)?)?),
        ModelId::QmReference => Box::new(QuantumModel),
        ModelId::Schulman1 => {
            return Err(Error::Usage(
                "schulman-1 describes a single photon; use schulman-2 for two-photon experiments".into(),
            ))
        }
    })
}

/// Largest deviation from ½ of either wing's empirical `+` frequency, over
/// the four setting pairs. Each wing is compared across the distant
/// setting, so this bounds any signalling through the outputs.
fn marginal_deviation(model: &dyn BellModel, config: &ExperimentConfig, rng: &RngStream) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, (a, b)) in config.settings.pairs().into_iter().enumerate() {
        let [first, second]: [u64; 2] = sharded_runs(
            model,
            a,
            b,
            config.samples,
            &rng.split(k as u64),
            |acc: &mut [u64; 2], run| {
                acc[0] += u64::from(run.a == Outcome::Plus);
                acc[1] += u64::from(run.b == Outcome::Plus);
            },
            |x, y| [x[0] + y[0], x[1] + y[1]],
        )?;
        let n = config.samples as f64;
        worst = worst.max((first as f64 / n - 0.5).abs()).max((second as f64 / n - 0.5).abs());
    }
    Ok(worst)
}

pub fn run_chsh(config: &ExperimentConfig) -> Result<Report> {
    let model = build_model(config)?;
    let model = model.as_ref();
    let rng = RngStream::new(config.seed, 0);
    let chsh = estimate_chsh(model, &config.settings, config.samples, &rng.split(0))?;
    let pairs = config.settings.pairs();

    let [c1, c2, c3, c4] = pairs
        .map(|(a, b)| model.joint_outcome_dist(a, b).map(|j| j.correlator()))
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .try_into()
        .expect("four pairs");
    let screening = pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| screening_residual(model, a, b, config.samples, SCREENING_BINS, &rng.split(1).split(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let lambda_independence = match model.hidden_variables() {
        Some(_) => Some(
            pairs
                .iter()
                .map(|&p| lambda_independence_residual(model, pairs[0], p))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };

    Ok(report(
        "run-chsh",
        config,
        Results::Chsh(ChshResults {
            correlators: chsh.correlators.to_vec(),
            s: chsh.s,
            s_standard_error: chsh.standard_error,
            log10_p_bound: chsh_pvalue(chsh.s, config.samples).log10,
            analytic_s: chsh_value(c1, c2, c3, c4),
            qm_s: qm_chsh(&config.settings),
            screening,
            lambda_independence,
            marginal_deviation: marginal_deviation(model, config, &rng.split(2))?,
        }),
    ))
}

pub fn scan_settings(config: &ExperimentConfig) -> Result<Report> {
    let k = config.grid;
    if k < 2 {
        return Err(Error::Usage(format!("scan grid must be at least 2, got {k}")));
    }
    if config.model == ModelId::PrBox {
        return Err(Error::Usage("pr-box is only defined at its four CHSH settings and cannot be scanned".into()));
    }
    let model = build_model(config)?;
    let h = PI / k as f64;
    let mut rows = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (PolAngle::new(i as f64 * h), PolAngle::new(j as f64 * h));
            let joint = model.joint_outcome_dist(a, b)?;
            rows.push(ScanRow {
                a: a.radians(),
                b: b.radians(),
                correlator: joint.correlator(),
                qm_correlator: qm_correlator(a, b),
                max_abs_diff: joint.max_abs_diff(&qm_joint(a, b)),
                joint,
            });
        }
    }
    let max_abs_diff = rows.iter().map(|r| r.max_abs_diff).fold(0.0, f64::max);
    Ok(report(
        "scan-settings",
        config,
        Results::Scan(ScanResults {
            grid: k,
            rows,
            max_abs_diff,
        }),
    ))
}

/// Single-photon bridges from `a` (the first setting) to `b` (the third).
pub fn run_schulman_paths(config: &ExperimentConfig) -> Result<Report> {
    if !config.model.is_schulman() {
        return Err(Error::Usage(format!(
            "schulman-paths needs a schulman model, not {}",
            config.model.as_str()
        )));
    }
    let g = gamma(config)?;
    let (theta1, theta2) = (config.settings.a, config.settings.b);
    let spec = PathSpec::new(config.steps, g, theta1, theta2)?;
    let paths = usize::try_from(config.samples).map_err(|_| Error::Usage("too many paths".into()))?;
    let rng = RngStream::new(config.seed, 0);
    let (stats, endpoints_exact) = bridge_ensemble(&spec, paths, &rng.split(0))?;

    let mut dominance_histogram = vec![0u64; 100];
    for d in &stats.dominance {
        dominance_histogram[((d * 100.0) as usize).min(99)] += 1;
    }
    Ok(report(
        "schulman-paths",
        config,
        Results::Paths(PathResults {
            paths,
            steps: config.steps,
            theta1: theta1.radians(),
            theta2: theta2.radians(),
            endpoints_exact,
            undefined: stats.undefined,
            kick_time_uniformity: stats.kick_time_uniformity(),
            kick_time_histogram: stats.kick_time_histogram.clone(),
            dominance_histogram,
            dominant_share: stats.dominant_share(0.99),
            net_dominant_share: stats.net_dominant_share(0.99),
            cauchy_stability: cauchy_stability_test(config.steps, g.value(), paths, &rng.split(1)),
        }),
    ))
}

pub fn run_mutual_info(config: &ExperimentConfig) -> Result<Report> {
    match config.model {
        ModelId::Hall => {}
        ModelId::DeltaMixture => {
            return Err(Error::Usage(
                "delta-mixture puts λ on point masses, so its mutual information with the settings grows \
                 without bound as the λ resolution is refined; only hall has a finite value"
                    .into(),
            ))
        }
        m => {
            return Err(Error::Usage(format!(
                "mutual information is only computed for hall, not {}",
                m.as_str()
            )))
        }
    }
    let m = config.lambda_grid.unwrap_or(super::config::DEFAULT_LAMBDA_GRID);
    let mi = mutual_information_hall(m, config.settings_grid)?;
    Ok(report(
        "mutual-info",
        config,
        Results::MutualInfo(MutualInfoResults {
            bits: mi.bits,
            coarse_bits: mi.coarse_bits,
            error_estimate: mi.error_estimate,
            lambda_grid: mi.lambda_grid,
            settings_grid: mi.settings_grid,
        }),
    ))
}

pub fn run_two_photon(config: &ExperimentConfig) -> Result<Report> {
    if config.model != ModelId::Schulman2 {
        return Err(Error::Usage(format!(
            "two-photon needs model schulman-2, not {}",
            config.model.as_str()
        )));
    }
    let g = gamma(config)?;
    let grid = config.lambda_grid.unwrap_or_else(|| default_grid(g.value()));
    let mut pairs = Vec::with_capacity(4);
    let mut atom_window_mass = Vec::new();
    for (k, (a, b)) in config.settings.pairs().into_iter().enumerate() {
        let r = two_photon_joint(a, b, g, grid)?;
        if k == 0 {
            atom_window_mass = [a, a.perpendicular(), b, b.perpendicular()]
                .iter()
                .map(|&c| r.window_mass(c, 3.0 * g.value()))
                .collect();
        }
        let q = qm_joint(a, b);
        pairs.push(TwoPhotonPair {
            a: a.radians(),
            b: b.radians(),
            correlator: r.joint.correlator(),
            qm_correlator: q.correlator(),
            max_abs_diff_qm: r.joint.max_abs_diff(&q),
            joint: r.joint,
        });
    }
    let s = chsh_value(pairs[0].correlator, pairs[1].correlator, pairs[2].correlator, pairs[3].correlator);
    Ok(report(
        "two-photon",
        config,
        Results::TwoPhoton(TwoPhotonResults {
            lambda_grid: grid,
            pairs,
            s,
            atom_window_mass,
        }),
    ))
}
