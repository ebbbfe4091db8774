//! Experiment configuration: a flat TOML table with a schema version. Command-line
//! flags override file keys; `PARAMORPHISM_SEED` replaces the built-in default seed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "PARAMORPHISM_SEED";

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid configuration: {0}")]
pub struct ConfigInvalid(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    P1,
    P2,
    P3,
    P4,
    Length,
    Frag,
    Nondeg,
    Estimate,
    D1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FlowPreset {
    Rotation,
    Eggbeater,
    Collar,
    RandomFourier,
}

/// Resolved configuration. Every field has a documented default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Default `estimate`.
    pub experiment: Experiment,
    /// Default `eggbeater`.
    pub flow: FlowPreset,
    /// Evaluator name: `cross-linking` (default), `signature` or `exponent-sum`.
    pub qm: String,
    /// Strand count, default 4; must exceed 3.
    pub n: usize,
    /// Total Monte Carlo samples, default 2000.
    pub samples: usize,
    /// Iteration counts as `a..b` (inclusive) or a comma list, default `1..20`.
    pub k_range: String,
    /// Default 0, or `PARAMORPHISM_SEED` when set.
    pub seed: u64,
    /// Worker threads, default 1. Does not affect results.
    pub workers: usize,
    /// Output directory, default `out`.
    pub out: PathBuf,
    /// Rotation angle or collar boundary rate, default 1.0.
    pub angle: f64,
    /// Rotation axis: `x`, `y` or `z` (default).
    pub axis: String,
    /// Collar half-width, default 0.1.
    pub delta: f64,
    /// Random Fourier amplitude, default 0.5.
    pub amplitude: f64,
    /// Eggbeater disk-area scale, default 1.0.
    pub scale: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: Experiment::Estimate,
            flow: FlowPreset::Eggbeater,
            qm: "cross-linking".into(),
            n: 4,
            samples: 2000,
            k_range: "1..20".into(),
            seed: 0,
            workers: 1,
            out: PathBuf::from("out"),
            angle: 1.0,
            axis: "z".into(),
            delta: 0.1,
            amplitude: 0.5,
            scale: 1.0,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub flow: Option<FlowPreset>,
    pub qm: Option<String>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub k_range: Option<String>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub angle: Option<f64>,
    pub axis: Option<String>,
    pub delta: Option<f64>,
    pub amplitude: Option<f64>,
    pub scale: Option<f64>,
}

fn env_seed() -> Result<Option<u64>, ConfigInvalid> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| ConfigInvalid(format!("{SEED_ENV}={s} is not a seed"))),
        Err(_) => Ok(None),
    }
}

impl ExperimentConfig {
    /// Parses a flat TOML document; absent keys take their defaults.
    pub fn from_toml(text: &str) -> Result<Self, ConfigInvalid> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigInvalid(e.to_string()))?;
        if let Some((k, _)) = table.iter().find(|(_, v)| v.is_table() || v.is_array()) {
            return Err(ConfigInvalid(format!("key {k} must be a plain value")));
        }
        match table.get("schema_version").and_then(|v| v.as_integer()) {
            Some(v) if v == SCHEMA_VERSION as i64 => {}
            Some(v) => return Err(ConfigInvalid(format!("unsupported schema_version {v}"))),
            None => return Err(ConfigInvalid("missing schema_version".into())),
        }
        let mut merged = toml::Table::try_from(Self::default()).expect("defaults serialize");
        if let Some(seed) = env_seed()? {
            merged.insert("seed".into(), toml::Value::Integer(seed as i64));
        }
        merged.extend(table);
        merged.try_into().map_err(|e: toml::de::Error| ConfigInvalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigInvalid> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigInvalid(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Defaults (with the environment seed), then the optional file, then flags.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, ConfigInvalid> {
        let mut c = match file {
            Some(p) => Self::load(p)?,
            None => {
                let mut c = Self::default();
                if let Some(seed) = env_seed()? {
                    c.seed = seed;
                }
                c
            }
        };
        macro_rules! apply {
            ($($f:ident),*) => { $(if let Some(v) = &flags.$f { c.$f = v.clone(); })* };
        }
        apply!(experiment, flow, qm, n, samples, k_range, seed, workers, out, angle, axis, delta, amplitude, scale);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigInvalid> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigInvalid(format!("unsupported schema_version {}", self.schema_version)));
        }
        if self.n <= 3 {
            return Err(ConfigInvalid(format!("n = {} but n > 3 is required", self.n)));
        }
        if self.n > 8 {
            return Err(ConfigInvalid(format!("n = {} exceeds the supported maximum 8", self.n)));
        }
        if self.workers == 0 {
            return Err(ConfigInvalid("workers must be positive".into()));
        }
        if !matches!(self.qm.as_str(), "cross-linking" | "signature" | "exponent-sum") {
            return Err(ConfigInvalid(format!("unknown evaluator {}", self.qm)));
        }
        if !matches!(self.axis.as_str(), "x" | "y" | "z") {
            return Err(ConfigInvalid(format!("axis {} is not x, y or z", self.axis)));
        }
        for (name, v) in [("angle", self.angle), ("delta", self.delta), ("amplitude", self.amplitude), ("scale", self.scale)] {
            if !v.is_finite() {
                return Err(ConfigInvalid(format!("{name} must be finite")));
            }
        }
        self.ks()?;
        Ok(())
    }

    /// Iteration counts from `k_range`.
    pub fn ks(&self) -> Result<Vec<usize>, ConfigInvalid> {
        parse_k_range(&self.k_range)
    }

    /// Canonical `key=value` lines, sorted by key. The output directory and worker
    /// count are excluded because they do not affect results.
    pub fn canonical(&self) -> String {
        let table = toml::Table::try_from(self).expect("config serializes");
        let lines: BTreeMap<&String, String> = table
            .iter()
            .filter(|(k, _)| k.as_str() != "out" && k.as_str() != "workers")
            .map(|(k, v)| (k, v.to_string()))
            .collect();
        lines.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `"1..20"` (inclusive) or `"1,2,5"`.
pub fn parse_k_range(text: &str) -> Result<Vec<usize>, ConfigInvalid> {
    let bad = || ConfigInvalid(format!("bad k range {text:?}"));
    let ks: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad());
    }
    Ok(ks)
}
