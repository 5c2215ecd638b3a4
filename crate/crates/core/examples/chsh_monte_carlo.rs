//! Sampled CHSH experiments for every model at the Tsirelson settings.

use belllab::estimator::{chsh_pvalue, estimate_chsh};
use belllab::models::{BellModel, DeltaMixtureModel, HallModel, LocalBaselineModel, PrBoxModel};
use belllab::schulman::{KickWidth, SchulmanPairModel};
use belllab::{tsirelson_settings, QuantumModel, Result, RngStream};

fn main() -> Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let settings = tsirelson_settings();
    let rng = RngStream::new(42, 0);
    let schulman = SchulmanPairModel::new(KickWidth::new(1e-3)?)?;
    let pr = PrBoxModel::new(settings);
    let models: [&dyn BellModel; 6] = [&QuantumModel, &DeltaMixtureModel, &HallModel, &schulman, &LocalBaselineModel, &pr];

    println!("{n} trials per correlator");
    for (i, m) in models.iter().enumerate() {
        let r = estimate_chsh(*m, &settings, n, &rng.split(i as u64))?;
        let c: Vec<String> = r.correlators.iter().map(|c| format!("{:+.4}", c.value)).collect();
        println!(
            "{:<15} <AB> = [{}]  S = {:.4} ± {:.4}  log10 p <= {:.1}",
            m.name(),
            c.join(", "),
            r.s,
            r.standard_error,
            chsh_pvalue(r.s, n).log10
        );
    }
    Ok(())
}
