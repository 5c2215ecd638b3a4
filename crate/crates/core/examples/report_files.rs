//! Running an experiment through the CLI layer and writing its report.

use belllab::cli::commands::run_chsh;
use belllab::cli::config::Defaults;
use belllab::cli::{ConfigLayer, ExperimentConfig, OutputFormat, Report};
use belllab::Result;

fn main() -> Result<()> {
    let layer = ConfigLayer::parse("model = hall\nsamples = 20000\nseed = 42\nformat = csv\n")?;
    let (config, _) = ExperimentConfig::resolve(
        layer,
        Defaults {
            model: None,
            samples: 1_000_000,
        },
    )?;
    let report = run_chsh(&config)?;
    let csv = report.render(OutputFormat::Csv)?;
    let keys = ["config.model,", "config.seed,", "results.s,", "results.s_standard_error,", "results.log10_p_bound,"];
    for line in csv.lines().filter(|l| keys.iter().any(|k| l.starts_with(k))) {
        println!("{line}");
    }
    let back = Report::parse(&csv, OutputFormat::Csv)?;
    println!("round trip identical: {}", back == report);
    Ok(())
}
