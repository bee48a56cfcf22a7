//! Experiment configuration files.
//!
//! ```toml
//! scenario = "equal-optimized"
//! n = 10000
//! powers = [1.0, 1.0]
//! secure_rates = [0.3333, 0.3333]
//! ensembles = ["preset:equal-mother", "preset:equal-mother"]
//! puncturing = "optimized"
//! puncturing_files = ["preset:equal-puncturing", "preset:equal-puncturing"]
//! sigma2 = [0.16, 0.18, 0.2]
//! ```
//!
//! Paths are relative to the configuration file. A `preset:` prefix names
//! one of the built-in distributions instead of a file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{sigma2_from_snr_db, Tap};
use crate::ensembles::{load_ensemble, load_puncturing, presets, Ensemble, PuncturingDistribution};
use crate::error::{Error, Result};

/// How the secret block is placed on the mother code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PuncturingMode {
    /// Per-degree fractions read from `puncturing_files`.
    Optimized,
    /// The same fraction on every degree.
    Random,
    /// Secret bits are transmitted; codes have length `n`.
    None,
}

fn default_taps() -> Vec<String> {
    vec!["bob".into(), "eve".into()]
}
fn default_min_errors() -> u64 {
    100
}
fn default_min_frames() -> u64 {
    1
}
fn default_max_frames() -> u64 {
    5000
}
fn default_max_iter() -> usize {
    crate::decoder::DEFAULT_MAX_ITER
}
fn default_batch_cap() -> u64 {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    /// Transmitted bits per user and frame.
    pub n: usize,
    pub powers: [f64; 2],
    pub secure_rates: [f64; 2],
    /// Mother-code rates; the ensembles' own rates when absent.
    #[serde(default)]
    pub mother_rates: Option<[f64; 2]>,
    pub ensembles: [String; 2],
    pub puncturing: PuncturingMode,
    #[serde(default)]
    pub puncturing_files: Option<[String; 2]>,
    #[serde(default)]
    pub sigma2: Option<Vec<f64>>,
    #[serde(default)]
    pub snr_db: Option<Vec<f64>>,
    #[serde(default = "default_taps")]
    pub taps: Vec<String>,
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    /// Frames simulated before the error-count rule may stop a point.
    #[serde(default = "default_min_frames")]
    pub min_frames: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Largest number of frames simulated between stopping checks.
    #[serde(default = "default_batch_cap")]
    pub batch_cap: u64,
    #[serde(default)]
    pub seed: u64,
    /// Graph of user `j` is built with `graph_seed + j`.
    #[serde(default)]
    pub graph_seed: u64,
    #[serde(default)]
    pub pattern_seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        if let Some(dir) = &cfg.cache_dir {
            if dir.is_relative() {
                cfg.cache_dir = Some(base_dir.join(dir));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if !(self.powers[0] > 0.0 && self.powers[1] > 0.0) {
            return Err(Error::Config("powers must be positive".into()));
        }
        let grid = self.sigma2_grid()?;
        if grid.is_empty() {
            return Err(Error::Config("empty noise grid".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("noise grid must be strictly increasing".into()));
        }
        if grid.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::Config("noise variances must be finite and non-negative".into()));
        }
        if self.puncturing == PuncturingMode::Optimized && self.puncturing_files.is_none() {
            return Err(Error::Config("optimized puncturing needs puncturing_files".into()));
        }
        if self.min_errors == 0 || self.max_frames == 0 || self.batch_cap == 0 {
            return Err(Error::Config("min_errors, max_frames and batch_cap must be positive".into()));
        }
        self.tap_list()?;
        Ok(())
    }

    /// Noise variances of the sweep, increasing.
    pub fn sigma2_grid(&self) -> Result<Vec<f64>> {
        match (&self.sigma2, &self.snr_db) {
            (Some(s), None) => Ok(s.clone()),
            (None, Some(db)) => {
                // Increasing noise means decreasing SNR.
                let mut v: Vec<f64> = db
                    .iter()
                    .map(|&d| sigma2_from_snr_db(self.powers[0], self.powers[1], d))
                    .collect();
                v.sort_by(f64::total_cmp);
                Ok(v)
            }
            _ => Err(Error::Config("give exactly one of sigma2 and snr_db".into())),
        }
    }

    pub fn tap_list(&self) -> Result<Vec<Tap>> {
        self.taps.iter().map(|t| t.parse()).collect()
    }

    pub fn ensemble(&self, user: usize) -> Result<Ensemble> {
        ensemble_from_spec(&self.ensembles[user], &self.base_dir)
    }

    /// Puncturing distribution file of `user`, if the mode uses one.
    pub fn puncturing_distribution(&self, user: usize) -> Result<Option<PuncturingDistribution>> {
        match &self.puncturing_files {
            Some(files) => puncturing_from_spec(&files[user], &self.base_dir).map(Some),
            None => Ok(None),
        }
    }
}

fn resolve(spec: &str, base_dir: &Path) -> PathBuf {
    let p = Path::new(spec);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}

/// Loads an ensemble from a file path or a `preset:` name.
pub fn ensemble_from_spec(spec: &str, base_dir: &Path) -> Result<Ensemble> {
    match spec.strip_prefix("preset:") {
        Some(name) => preset_ensemble(name),
        None => load_ensemble(resolve(spec, base_dir)),
    }
}

/// Loads a puncturing distribution from a file path or a `preset:` name.
pub fn puncturing_from_spec(spec: &str, base_dir: &Path) -> Result<PuncturingDistribution> {
    match spec.strip_prefix("preset:") {
        Some(name) => preset_puncturing(name),
        None => Ok(load_puncturing(resolve(spec, base_dir))?.0),
    }
}

/// Built-in ensembles by name.
pub fn preset_ensemble(name: &str) -> Result<Ensemble> {
    Ok(match name {
        "equal-mother" => presets::equal_power_mother(),
        "unequal-mother-1" => presets::unequal_power_mother_user1(),
        "unequal-mother-2" => presets::unequal_power_mother_user2(),
        _ => return Err(Error::Config(format!("unknown ensemble preset {name:?}"))),
    })
}

/// Built-in puncturing distributions by name.
pub fn preset_puncturing(name: &str) -> Result<PuncturingDistribution> {
    Ok(match name {
        "equal-puncturing" => presets::equal_power_puncturing(),
        "unequal-puncturing-1" => presets::unequal_power_puncturing_user1(),
        "unequal-puncturing-2" => presets::unequal_power_puncturing_user2(),
        _ => return Err(Error::Config(format!("unknown puncturing preset {name:?}"))),
    })
}
