//! Report files.
//!
//! A report is a serde tree written either as pretty JSON or as a
//! two-column `key,value` CSV whose keys are dotted paths into the tree.
//! CSV floats use 17 significant digits, so both forms are lossless.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::estimator::{CorrelatorEstimate, ScreeningReport};
use crate::qm::JointDist;
use crate::stats::TestStatistic;

use super::config::{ExperimentConfig, OutputFormat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub results: Results,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    Chsh(ChshResults),
    Scan(ScanResults),
    Paths(PathResults),
    MutualInfo(MutualInfoResults),
    TwoPhoton(TwoPhotonResults),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshResults {
    /// In CHSH order `(a,b), (a',b), (a,b'), (a',b')`.
    pub correlators: Vec<CorrelatorEstimate>,
    pub s: f64,
    pub s_standard_error: f64,
    pub log10_p_bound: f64,
    /// `S` from the model's exact joint distributions.
    pub analytic_s: f64,
    pub qm_s: f64,
    pub screening: Vec<ScreeningReport>,
    /// Total-variation distance of each pair's λ law from the first pair's.
    pub lambda_independence: Option<Vec<f64>>,
    /// Largest deviation of an empirical marginal from ½.
    pub marginal_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub correlator: f64,
    pub qm_correlator: f64,
    pub joint: JointDist,
    pub max_abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResults {
    pub grid: usize,
    pub rows: Vec<ScanRow>,
    pub max_abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathResults {
    pub paths: usize,
    pub steps: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub endpoints_exact: bool,
    pub undefined: usize,
    pub kick_time_histogram: Vec<u64>,
    pub kick_time_uniformity: TestStatistic,
    /// Counts of the largest-kick share of all kick magnitudes, in 100
    /// equal bins over `[0, 1]`.
    pub dominance_histogram: Vec<u64>,
    /// Share of paths whose largest kick exceeds 99% of the summed kicks.
    pub dominant_share: f64,
    /// Share of paths whose largest kick exceeds 99% of |Δq|.
    pub net_dominant_share: f64,
    pub cauchy_stability: TestStatistic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoResults {
    pub bits: f64,
    pub coarse_bits: f64,
    pub error_estimate: f64,
    pub lambda_grid: usize,
    pub settings_grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonPair {
    pub a: f64,
    pub b: f64,
    pub joint: JointDist,
    pub correlator: f64,
    pub qm_correlator: f64,
    pub max_abs_diff_qm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonResults {
    pub lambda_grid: usize,
    pub pairs: Vec<TwoPhotonPair>,
    pub s: f64,
    /// Posterior mass within ±3γ of `a, a+π/2, b, b+π/2` for the first pair.
    pub atom_window_mass: Vec<f64>,
}

fn fmt_number(n: &Number) -> String {
    if let Some(u) = n.as_u64() {
        u.to_string()
    } else if let Some(i) = n.as_i64() {
        i.to_string()
    } else {
        format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN))
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::Object(_) => out.push((prefix.to_string(), "{}".into())),
        Value::Array(_) => out.push((prefix.to_string(), "[]".into())),
        Value::Null => out.push((prefix.to_string(), "null".into())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), fmt_number(n))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

fn cell_value(s: &str) -> Value {
    match s {
        "null" => return Value::Null,
        "true" => return Value::Bool(true),
        "false" => return Value::Bool(false),
        "[]" => return Value::Array(Vec::new()),
        "{}" => return Value::Object(Map::new()),
        _ => {}
    }
    if let Ok(u) = s.parse::<u64>() {
        return Value::from(u);
    }
    if let Ok(i) = s.parse::<i64>() {
        return Value::from(i);
    }
    if s.contains(['e', '.']) {
        if let Some(n) = s.parse::<f64>().ok().and_then(Number::from_f64) {
            return Value::Number(n);
        }
    }
    Value::String(s.to_string())
}

fn insert(slot: &mut Value, path: &[&str], leaf: Value) -> Result<()> {
    let Some((head, rest)) = path.split_first() else {
        *slot = leaf;
        return Ok(());
    };
    let bad = || Error::Usage(format!("malformed report key at `{head}`"));
    let child = if let Ok(i) = head.parse::<usize>() {
        if slot.is_null() {
            *slot = Value::Array(Vec::new());
        }
        let arr = slot.as_array_mut().ok_or_else(bad)?;
        if i == arr.len() {
            arr.push(Value::Null);
        }
        arr.get_mut(i).ok_or_else(bad)?
    } else {
        if slot.is_null() {
            *slot = Value::Object(Map::new());
        }
        slot.as_object_mut().ok_or_else(bad)?.entry(head.to_string()).or_insert(Value::Null)
    };
    insert(child, rest, leaf)
}

impl Report {
    pub fn to_csv(&self) -> Result<String> {
        let mut rows = Vec::new();
        flatten("", &serde_json::to_value(self)?, &mut rows);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["key", "value"])?;
        for (k, v) in rows {
            w.write_record([k, v])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Report> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut root = Value::Null;
        for rec in r.records() {
            let rec = rec?;
            let (Some(k), Some(v)) = (rec.get(0), rec.get(1)) else {
                return Err(Error::Usage("report rows need a key and a value".into()));
            };
            let path: Vec<&str> = k.split('.').collect();
            insert(&mut root, &path, cell_value(v))?;
        }
        Ok(serde_json::from_value(root)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    pub fn parse(text: &str, format: OutputFormat) -> Result<Report> {
        match format {
            OutputFormat::Json => Report::from_json(text),
            OutputFormat::Csv => Report::from_csv(text),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{ModelId, DEFAULT_SETTINGS_GRID};
    use crate::qm::{qm_joint, tsirelson_settings};
    use crate::PolAngle;

    fn sample_report() -> Report {
        Report {
            command: "scan-settings".into(),
            version: "0.1.0".into(),
            config: ExperimentConfig {
                model: ModelId::Schulman2,
                settings: tsirelson_settings(),
                samples: 12,
                gamma: Some(1e-3),
                seed: u64::MAX,
                format: OutputFormat::Csv,
                grid: 2,
                lambda_grid: None,
                settings_grid: DEFAULT_SETTINGS_GRID,
                steps: 100,
            },
            results: Results::Scan(ScanResults {
                grid: 2,
                rows: vec![ScanRow {
                    a: 0.1,
                    b: 1.0 / 3.0,
                    correlator: -0.0,
                    qm_correlator: 1.0,
                    joint: qm_joint(PolAngle::ZERO, PolAngle::new(0.3)),
                    max_abs_diff: 1e-300,
                }],
                max_abs_diff: 0.0,
            }),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let r = sample_report();
        let text = r.to_csv().unwrap();
        assert!(text.starts_with("key,value\n"));
        assert!(!text.contains('\r'));
        let back = Report::from_csv(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_csv().unwrap(), text);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample_report();
        let text = r.to_json().unwrap();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn empty_collections_survive_csv() {
        let mut r = sample_report();
        r.results = Results::Chsh(ChshResults {
            correlators: vec![],
            s: 4.0,
            s_standard_error: 0.0,
            log10_p_bound: -1e5,
            analytic_s: 4.0,
            qm_s: 2.0,
            screening: vec![ScreeningReport {
                residual: 0.25,
                bound: 0.01,
                worst_ratio: 25.0,
                bins_used: 1,
                excluded_bins: vec![],
            }],
            lambda_independence: None,
            marginal_deviation: 0.0,
        });
        let back = Report::from_csv(&r.to_csv().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn floats_use_seventeen_digits() {
        assert_eq!(fmt_number(&Number::from_f64(0.1).unwrap()), "1.0000000000000001e-1");
        assert_eq!(fmt_number(&Number::from(42u64)), "42");
    }
}
