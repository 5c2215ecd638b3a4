//! Experiment configuration: flat `key = value` files, flags and the
//! seed environment variable, merged in that order of precedence.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::PolAngle;
use crate::error::{Error, Result};
use crate::qm::{tsirelson_settings, ChshSettings};

pub const SEED_ENV: &str = "BELLLAB_DEFAULT_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    DeltaMixture,
    Hall,
    LocalBaseline,
    PrBox,
    #[serde(rename = "schulman-1")]
    Schulman1,
    #[serde(rename = "schulman-2")]
    Schulman2,
    QmReference,
}

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId::DeltaMixture,
        ModelId::Hall,
        ModelId::LocalBaseline,
        ModelId::PrBox,
        ModelId::Schulman1,
        ModelId::Schulman2,
        ModelId::QmReference,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::DeltaMixture => "delta-mixture",
            ModelId::Hall => "hall",
            ModelId::LocalBaseline => "local-baseline",
            ModelId::PrBox => "pr-box",
            ModelId::Schulman1 => "schulman-1",
            ModelId::Schulman2 => "schulman-2",
            ModelId::QmReference => "qm-reference",
        }
    }

    pub fn is_schulman(self) -> bool {
        matches!(self, ModelId::Schulman1 | ModelId::Schulman2)
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = ModelId::ALL.iter().map(|m| m.as_str()).collect();
                Error::Usage(format!("unknown model `{s}` (expected one of {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Usage(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// Parse an angle given in radians (`0.3927`) or as a multiple of π
/// (`0.125pi`, `-pi/8`, `π/4`).
pub fn parse_angle(s: &str) -> Result<PolAngle> {
    let t = s.trim();
    let bad = || Error::Usage(format!("cannot parse angle `{s}`"));
    let pi_form = t.replace('π', "pi");
    if let Some(pos) = pi_form.find("pi") {
        let (coef, rest) = pi_form.split_at(pos);
        let rest = &rest[2..];
        let coef = coef.trim().trim_end_matches('*');
        let k = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let div = match rest.trim() {
            "" => 1.0,
            r => r.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
        };
        let v = k * PI / div;
        return if v.is_finite() { Ok(PolAngle::new(v)) } else { Err(bad()) };
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(PolAngle::new(v))
    } else {
        Err(bad())
    }
}

/// Parse `a,a',b,b'`.
pub fn parse_settings(s: &str) -> Result<ChshSettings> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Usage(format!("settings need four angles a,a',b,b', got `{s}`")));
    }
    let v = parts.iter().map(|p| parse_angle(p)).collect::<Result<Vec<_>>>()?;
    Ok(ChshSettings::new(v[0], v[1], v[2], v[3]))
}

/// Unresolved options from one source. Every field is optional so that
/// sources can be layered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub model: Option<ModelId>,
    pub settings: Option<ChshSettings>,
    pub samples: Option<u64>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub grid: Option<usize>,
    pub lambda_grid: Option<usize>,
    pub settings_grid: Option<usize>,
    pub steps: Option<usize>,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("invalid value `{v}` for `{key}`")))
}

impl ConfigLayer {
    /// Values present in `other` replace ours.
    pub fn overlay(self, other: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            model: other.model.or(self.model),
            settings: other.settings.or(self.settings),
            samples: other.samples.or(self.samples),
            gamma: other.gamma.or(self.gamma),
            seed: other.seed.or(self.seed),
            workers: other.workers.or(self.workers),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
            grid: other.grid.or(self.grid),
            lambda_grid: other.lambda_grid.or(self.lambda_grid),
            settings_grid: other.settings_grid.or(self.settings_grid),
            steps: other.steps.or(self.steps),
        }
    }

    /// Parse a flat config document: one `key = value` per line, `#`
    /// comments, keys spelled like the long flags (`-` or `_`).
    pub fn parse(text: &str) -> Result<ConfigLayer> {
        let mut layer = ConfigLayer::default();
        let mut seen = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected `key = value`", no + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if seen.insert(key.clone(), no).is_some() {
                return Err(Error::Usage(format!("config line {}: duplicate key `{key}`", no + 1)));
            }
            match key.as_str() {
                "model" => layer.model = Some(value.parse()?),
                "settings" => layer.settings = Some(parse_settings(value)?),
                "samples" => layer.samples = Some(parse_num(&key, value)?),
                "gamma" => layer.gamma = Some(parse_num(&key, value)?),
                "seed" => layer.seed = Some(parse_num(&key, value)?),
                "workers" => layer.workers = Some(parse_num(&key, value)?),
                "out" => layer.out = Some(PathBuf::from(value)),
                "format" => layer.format = Some(value.parse()?),
                "grid" => layer.grid = Some(parse_num(&key, value)?),
                "lambda-grid" => layer.lambda_grid = Some(parse_num(&key, value)?),
                "settings-grid" => layer.settings_grid = Some(parse_num(&key, value)?),
                "steps" => layer.steps = Some(parse_num(&key, value)?),
                _ => return Err(Error::Usage(format!("config line {}: unknown key `{key}`", no + 1))),
            }
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<ConfigLayer> {
        ConfigLayer::parse(&std::fs::read_to_string(path)?)
    }

    /// Seed from [`SEED_ENV`], if set.
    pub fn from_env() -> Result<ConfigLayer> {
        match std::env::var(SEED_ENV) {
            Ok(v) => Ok(ConfigLayer {
                seed: Some(parse_num(SEED_ENV, &v)?),
                ..ConfigLayer::default()
            }),
            Err(_) => Ok(ConfigLayer::default()),
        }
    }
}

/// A fully resolved experiment. This is echoed into every report, so it
/// holds only what determines the numbers: worker count and output path
/// are kept in [`RunOptions`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelId,
    pub settings: ChshSettings,
    pub samples: u64,
    pub gamma: Option<f64>,
    pub seed: u64,
    pub format: OutputFormat,
    pub grid: usize,
    pub lambda_grid: Option<usize>,
    pub settings_grid: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Defaults that differ between subcommands.
#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    pub model: Option<ModelId>,
    pub samples: u64,
}

pub const DEFAULT_SCAN_GRID: usize = 16;
pub const DEFAULT_LAMBDA_GRID: usize = 512;
pub const DEFAULT_SETTINGS_GRID: usize = 64;
pub const DEFAULT_STEPS: usize = 100;

impl ExperimentConfig {
    pub fn resolve(layer: ConfigLayer, defaults: Defaults) -> Result<(ExperimentConfig, RunOptions)> {
        let model = layer
            .model
            .or(defaults.model)
            .ok_or_else(|| Error::Usage("no model given (use --model)".into()))?;
        let samples = layer.samples.unwrap_or(defaults.samples);
        if samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        match (model.is_schulman(), layer.gamma) {
            (true, None) => return Err(Error::Usage(format!("model {} needs --gamma", model.as_str()))),
            (true, Some(g)) if !(g.is_finite() && g > 0.0) => {
                return Err(Error::Usage(format!("gamma must be positive, got {g}")))
            }
            (false, Some(_)) => {
                return Err(Error::Usage(format!("--gamma only applies to schulman models, not {}", model.as_str())))
            }
            _ => {}
        }
        if layer.workers == Some(0) {
            return Err(Error::Usage("workers must be at least 1".into()));
        }
        let config = ExperimentConfig {
            model,
            settings: layer.settings.unwrap_or_else(tsirelson_settings),
            samples,
            gamma: layer.gamma,
            seed: layer.seed.unwrap_or(0),
            format: layer.format.unwrap_or_default(),
            grid: layer.grid.unwrap_or(DEFAULT_SCAN_GRID),
            lambda_grid: layer.lambda_grid,
            settings_grid: layer.settings_grid.unwrap_or(DEFAULT_SETTINGS_GRID),
            steps: layer.steps.unwrap_or(DEFAULT_STEPS),
        };
        Ok((
            config,
            RunOptions {
                workers: layer.workers,
                out: layer.out,
            },
        ))
    }
}
