//! Run parameters: flags first, then the JSON config file, then defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Keys accepted in a `--config` file. Every key is optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub beta_h: Option<f64>,
    pub beta_c: Option<f64>,
    pub betas: Option<Vec<f64>>,
    pub j: Option<f64>,
    pub h: Option<f64>,
    pub j_min: Option<f64>,
    pub j_max: Option<f64>,
    pub j_step: Option<f64>,
    #[serde(alias = "N")]
    pub n: Option<usize>,
    pub epsilon: Option<Vec<f64>>,
    pub mode: Option<String>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub h_a: Option<f64>,
    pub h_b: Option<f64>,
    pub h_c: Option<f64>,
    pub h_d: Option<f64>,
    pub class: Option<String>,
    pub micro_steps: Option<usize>,
    pub model: Option<String>,
    pub controls: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub max_depth: Option<usize>,
    pub tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("--config {}: {e}", path.display())))
    }
}

/// Picks the flag value, then the config value, then the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Like [`pick`] for repeatable flags, where an empty list means "not given".
pub fn pick_list<T>(flag: Vec<T>, file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or(default)
    }
}

/// Same as [`pick`] without a default: a missing value names the flag.
pub fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file).ok_or_else(|| CliError::Config(format!("{name} is required")))
}

pub fn finite(value: f64, name: &str) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {value}")))
    }
}

pub fn positive(value: f64, name: &str) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {value}")))
    }
}

/// `--j-min/--j-max/--j-step` checked for a non-empty ascending range.
pub fn j_range(min: f64, max: f64, step: f64) -> Result<(f64, f64, f64), CliError> {
    finite(min, "--j-min")?;
    finite(max, "--j-max")?;
    positive(step, "--j-step")?;
    if max < min {
        return Err(CliError::Config(format!("--j-max ({max}) is below --j-min ({min})")));
    }
    Ok((min, max, step))
}
