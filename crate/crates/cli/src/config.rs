//! Run configuration: command-line flags over an optional JSON config file
//! over built-in defaults.

use std::path::Path;

use serde::Deserialize;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "ZIGZAG_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Weight cutoff `W` of the exact series.
    pub weight: usize,
    /// Requested decimal digits of numeric output.
    pub prec: u32,
    pub tol: f64,
    pub seed: u64,
    pub workers: usize,
    pub json: bool,
}

/// Every field optional; unknown keys are rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub weight: Option<usize>,
    pub prec: Option<u32>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub json: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Flag values as parsed; `None` falls through to the file, then the default.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub weight: Option<usize>,
    pub prec: Option<u32>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub json: bool,
}

impl RunConfig {
    pub fn resolve(flags: &Overrides, file: &ConfigFile) -> Result<RunConfig, String> {
        let cfg = RunConfig {
            weight: flags.weight.or(file.weight).unwrap_or(13),
            prec: flags.prec.or(file.prec).unwrap_or(12),
            tol: flags.tol.or(file.tol).unwrap_or(1e-10),
            seed: flags.seed.or(file.seed).unwrap_or(42),
            workers: flags
                .workers
                .or(file.workers)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            json: flags.json || file.json.unwrap_or(false),
        };
        if cfg.weight < 3 {
            return Err(format!("weight cutoff must be at least 3, got {}", cfg.weight));
        }
        if cfg.tol.is_nan() || cfg.tol <= 0.0 {
            return Err(format!("tolerance must be positive, got {}", cfg.tol));
        }
        if cfg.workers == 0 {
            return Err("worker count must be positive".into());
        }
        Ok(cfg)
    }
}
