//! Command-line front end of the `belllab` binary.
//!
//! Options come from, in increasing precedence: built-in defaults, the
//! `BELLLAB_DEFAULT_SEED` environment variable, a `--config` file and the
//! command-line flags. With `--out` the report is written to that file and
//! a summary goes to standard output; without it the report itself is
//! printed. Exit status is 0 on success, 1 when a computation fails to
//! converge and 2 for usage errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use config::{parse_angle, parse_settings, ConfigLayer, ExperimentConfig, ModelId, OutputFormat, RunOptions};
pub use report::{Report, Results};

#[derive(Debug, Parser)]
#[command(name = "belllab", version, about = "Bell-experiment simulations with hidden-variable models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the four CHSH correlators, S, its p-value bound and the
    /// locality residuals.
    RunChsh(Flags),
    /// Exact joint distributions over a K×K settings grid against QM.
    ScanSettings(Flags),
    /// Kick statistics of boundary-conditioned single-photon paths.
    SchulmanPaths(Flags),
    /// Mutual information between the Hall λ and the settings.
    MutualInfo(Flags),
    /// Two-photon Schulman joint distributions on a λ grid.
    TwoPhoton(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    /// a,a',b,b' in radians or multiples of pi (`0.125pi`).
    #[arg(long, allow_hyphen_values = true)]
    settings: Option<String>,
    /// Trials per correlator, or paths for schulman-paths.
    #[arg(long)]
    samples: Option<u64>,
    /// Total kick width of the Schulman models.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Settings grid size K of scan-settings.
    #[arg(long)]
    grid: Option<usize>,
    /// λ grid of mutual-info and two-photon.
    #[arg(long)]
    lambda_grid: Option<usize>,
    /// Settings grid per axis of mutual-info.
    #[arg(long)]
    settings_grid: Option<usize>,
    /// Steps per path of schulman-paths.
    #[arg(long)]
    steps: Option<usize>,
}

impl Flags {
    fn layer(&self) -> Result<ConfigLayer> {
        Ok(ConfigLayer {
            model: self.model.as_deref().map(str::parse).transpose()?,
            settings: self.settings.as_deref().map(parse_settings).transpose()?,
            samples: self.samples,
            gamma: self.gamma,
            seed: self.seed,
            workers: self.workers,
            out: self.out.clone(),
            format: self.format.as_deref().map(str::parse).transpose()?,
            grid: self.grid,
            lambda_grid: self.lambda_grid,
            settings_grid: self.settings_grid,
            steps: self.steps,
        })
    }

    fn resolve(&self, defaults: config::Defaults) -> Result<(ExperimentConfig, RunOptions)> {
        let mut layer = ConfigLayer::from_env()?;
        if let Some(path) = &self.config {
            layer = layer.overlay(ConfigLayer::from_file(path)?);
        }
        ExperimentConfig::resolve(layer.overlay(self.layer()?), defaults)
    }
}

fn summary(report: &Report) -> String {
    let c = &report.config;
    let head = format!("{} model={} seed={}", report.command, c.model.as_str(), c.seed);
    let body = match &report.results {
        Results::Chsh(r) => format!(
            "S = {:.6} ± {:.6} (exact {:.6}, QM {:.6}), log10 p ≤ {:.3}",
            r.s, r.s_standard_error, r.analytic_s, r.qm_s, r.log10_p_bound
        ),
        Results::Scan(r) => format!("{}×{} grid, max |P − P_QM| = {:.3e}", r.grid, r.grid, r.max_abs_diff),
        Results::Paths(r) => format!(
            "{} paths, endpoints exact: {}, dominant kick >99% of |Δq| in {:.2}% of paths, kick-time χ² p = {:.4}, stability KS p = {:.4}",
            r.paths,
            r.endpoints_exact,
            100.0 * r.net_dominant_share,
            r.kick_time_uniformity.p_value,
            r.cauchy_stability.p_value
        ),
        Results::MutualInfo(r) => format!(
            "I(λ; a,b) = {:.6} bits (halved grids {:.6}, |Δ| = {:.2e})",
            r.bits, r.coarse_bits, r.error_estimate
        ),
        Results::TwoPhoton(r) => format!(
            "S = {:.6}, max |P − P_QM| = {:.3e}",
            r.s,
            r.pairs.iter().map(|p| p.max_abs_diff_qm).fold(0.0, f64::max)
        ),
    };
    format!("{head}\n{body}")
}

type Experiment = fn(&ExperimentConfig) -> Result<Report>;

fn execute(command: &Command) -> Result<()> {
    use config::Defaults;
    let (flags, defaults, run): (&Flags, Defaults, Experiment) = match command {
        Command::RunChsh(f) => (f, Defaults { model: None, samples: 1_000_000 }, commands::run_chsh),
        Command::ScanSettings(f) => (f, Defaults { model: None, samples: 1 }, commands::scan_settings),
        Command::SchulmanPaths(f) => (
            f,
            Defaults {
                model: Some(ModelId::Schulman1),
                samples: 100_000,
            },
            commands::run_schulman_paths,
        ),
        Command::MutualInfo(f) => (
            f,
            Defaults {
                model: Some(ModelId::Hall),
                samples: 1,
            },
            commands::run_mutual_info,
        ),
        Command::TwoPhoton(f) => (
            f,
            Defaults {
                model: Some(ModelId::Schulman2),
                samples: 1,
            },
            commands::run_two_photon,
        ),
    };
    let (config, options) = flags.resolve(defaults)?;
    let started = Instant::now();
    let report = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::invalid(e.to_string()))?
            .install(|| run(&config))?,
        None => run(&config)?,
    };
    let text = report.render(config.format)?;
    match &options.out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("{}", summary(&report));
            println!("wall-clock {:.3} s, report written to {}", started.elapsed().as_secs_f64(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Run the CLI on `args` (including the program name) and return the exit
/// status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("belllab: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

/// 2 for errors in what was asked, 1 for computations that failed.
pub fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::InvalidArgument(_) | Error::UnknownSetting(_) | Error::Resolution { .. } => 2,
        _ => 1,
    }
}
