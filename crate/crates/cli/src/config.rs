//! JSON run configurations. Every document carries `schema_version`; unknown
//! fields are rejected so typos surface as exit code 2.

use std::path::PathBuf;

use cmixlab::concentration::{ComparatorParams, FunctionBounds, DEFAULT_PILOT_LEN};
use cmixlab::experiments::{Selection, DEFAULT_TEST_SIZE};
use cmixlab::learners::DEFAULT_GRID_CAP;
use cmixlab::losses::{LossKind, LossSpec};
use cmixlab::processes::{MixingRate, Observable, SystemKind};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u64 = 1;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Parses a config document, checking the schema version before the fields.
pub fn parse_config<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("not valid JSON: {e}")))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return invalid(format!(
                "unsupported schema_version {v}, expected {SCHEMA_VERSION}"
            ))
        }
        None => return invalid("missing integer field `schema_version`"),
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossName {
    LeastSquares,
    Pinball,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    pub kind: LossName,
    /// Quantile level, required for the pinball loss.
    #[serde(default)]
    pub tau: Option<f64>,
    pub clip_level: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl LossConfig {
    pub fn spec(&self) -> CliResult<LossSpec> {
        let kind = match (self.kind, self.tau) {
            (LossName::LeastSquares, None) => LossKind::LeastSquares,
            (LossName::LeastSquares, Some(_)) => {
                return invalid("tau only applies to the pinball loss")
            }
            (LossName::Pinball, Some(tau)) => LossKind::Pinball { tau },
            (LossName::Pinball, None) => return invalid("pinball loss needs tau"),
        };
        Ok(LossSpec::new(kind, self.clip_level, self.scale)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub schema_version: u64,
    pub system: SystemKind,
    pub n: usize,
    /// Defaults to the system's own burn-in.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Half-width of uniform observation noise; none when absent.
    #[serde(default)]
    pub noise: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingConfig {
    pub schema_version: u64,
    #[serde(default)]
    pub system: Option<SystemKind>,
    /// Observables whose pairwise correlations are maximised at each lag.
    #[serde(default)]
    pub dictionary: Vec<Observable>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub max_lag: Option<usize>,
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Lags whose correlation is within this many standard errors of zero
    /// are left out of the fit.
    #[serde(default = "default_significance")]
    pub significance: f64,
    /// Read `(lag, cor)` pairs from a CSV instead of simulating. Relative
    /// paths are taken from the config file's directory.
    #[serde(default)]
    pub correlation_file: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_significance() -> f64 {
    3.0
}

/// Where the correlations of a mixing run come from.
#[derive(Debug, Clone)]
pub enum MixingSource {
    Simulated {
        system: SystemKind,
        dictionary: Vec<Observable>,
        n: usize,
        max_lag: usize,
        burn_in: usize,
    },
    File(PathBuf),
}

impl MixingConfig {
    pub fn source(&self) -> CliResult<MixingSource> {
        if !(self.significance >= 0.0 && self.significance.is_finite()) {
            return invalid("significance must be finite and >= 0");
        }
        if let Some(path) = &self.correlation_file {
            if self.system.is_some()
                || !self.dictionary.is_empty()
                || self.n.is_some()
                || self.max_lag.is_some()
            {
                return invalid("correlation_file excludes system, dictionary, n and max_lag");
            }
            return Ok(MixingSource::File(path.clone()));
        }
        let Some(system) = self.system.clone() else {
            return invalid("need either `system` or `correlation_file`");
        };
        system.validate()?;
        if self.dictionary.is_empty() {
            return invalid("dictionary must contain at least one observable");
        }
        for h in &self.dictionary {
            h.validate(system.dim())?;
        }
        let (Some(n), Some(max_lag)) = (self.n, self.max_lag) else {
            return invalid("simulated mixing runs need `n` and `max_lag`");
        };
        if max_lag < 1 || max_lag >= n {
            return invalid(format!(
                "max_lag must lie in [1, n), got {max_lag} with n = {n}"
            ));
        }
        let burn_in = self.burn_in.unwrap_or_else(|| system.default_burn_in());
        Ok(MixingSource::Simulated {
            system,
            dictionary: self.dictionary.clone(),
            n,
            max_lag,
            burn_in,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub schema_version: u64,
    pub bounds: FunctionBounds,
    pub n_grid: Vec<u64>,
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub comparators: ComparatorParams,
}

impl BoundConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.bounds.validate()?;
        if self.n_grid.is_empty() || self.eps_grid.is_empty() {
            return invalid("n_grid and eps_grid must be nonempty");
        }
        if self.n_grid.iter().any(|&n| n < 1) {
            return invalid("every n must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    pub schema_version: u64,
    pub system: SystemKind,
    /// Test function `h`; centred by a pilot estimate of its mean.
    #[serde(default = "Observable::identity")]
    pub observable: Observable,
    pub bounds: FunctionBounds,
    pub rate: MixingRate,
    pub n: u64,
    pub eps_grid: Vec<f64>,
    pub replicas: usize,
    #[serde(default = "default_pilot_len")]
    pub pilot_len: usize,
    #[serde(default)]
    pub iid_surrogate: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_pilot_len() -> usize {
    DEFAULT_PILOT_LEN
}

impl ValidateConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.system.validate()?;
        self.observable.validate(self.system.dim())?;
        self.bounds.validate()?;
        self.rate.validate()?;
        if self.replicas == 0 {
            return invalid("replicas must be at least 1");
        }
        if self.eps_grid.is_empty() {
            return invalid("eps_grid must be nonempty");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    pub schema_version: u64,
    pub system: SystemKind,
    pub target: Observable,
    /// Half-width of uniform label noise.
    pub noise: f64,
    pub loss: LossConfig,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub selection: Selection,
    #[serde(default)]
    pub iid_inputs: bool,
    #[serde(default = "default_test_size")]
    pub test_size: usize,
}

fn default_test_size() -> usize {
    DEFAULT_TEST_SIZE
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastConfig {
    pub schema_version: u64,
    pub system: SystemKind,
    /// Half-width of uniform observation noise.
    pub noise: f64,
    /// Numbers of observations; each gives `n − 1` training pairs.
    pub sizes: Vec<usize>,
    pub loss: LossConfig,
    #[serde(default = "default_grid_cap")]
    pub grid_cap: usize,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default)]
    pub iid_inputs: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_grid_cap() -> usize {
    DEFAULT_GRID_CAP
}

fn default_mc_samples() -> usize {
    100_000
}

impl ForecastConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.system.validate()?;
        if self.sizes.is_empty() {
            return invalid("sizes must be nonempty");
        }
        if self.sizes.iter().any(|&n| n < 5) {
            return invalid("every size must be at least 5 observations");
        }
        if self.grid_cap < 1 {
            return invalid("grid_cap must be at least 1");
        }
        if self.mc_samples < 2 {
            return invalid("mc_samples must be at least 2");
        }
        Ok(())
    }
}
