//! Configuration-driven front end for the cmixlab experiments: trajectory
//! simulation, mixing-rate estimation, bound tables, Monte Carlo validation,
//! learning-rate runs and forecasting.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

pub use error::{CliError, CliResult};

use crate::commands::Report;
use crate::config::parse_config;
use crate::output::{sidecar_path, write_file};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Mixing,
    Bound,
    Validate,
    Rates,
    Forecast,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub command: Command,
    pub config: PathBuf,
    /// CSV destination; standard output when absent.
    pub out: Option<PathBuf>,
    /// Overrides the config's seed (for `rates`, offsets every seed).
    pub seed: Option<u64>,
    /// Worker threads; the available parallelism when absent.
    pub workers: Option<usize>,
    pub timestamp: bool,
}

/// Parses the config text and runs one command.
pub fn run_command(
    command: Command,
    text: &str,
    config_dir: &Path,
    seed: Option<u64>,
) -> CliResult<Report> {
    match command {
        Command::Simulate => {
            let c: config::SimulateConfig = parse_config(text)?;
            commands::simulate(&c, seed.unwrap_or(c.seed))
        }
        Command::Mixing => {
            let c: config::MixingConfig = parse_config(text)?;
            commands::mixing(&c, config_dir, seed.unwrap_or(c.seed))
        }
        Command::Bound => commands::bound(&parse_config(text)?),
        Command::Validate => {
            let c: config::ValidateConfig = parse_config(text)?;
            commands::validate(&c, seed.unwrap_or(c.seed))
        }
        Command::Rates => commands::rates(&parse_config(text)?, seed.unwrap_or(0)),
        Command::Forecast => {
            let c: config::ForecastConfig = parse_config(text)?;
            commands::forecast(&c, seed.unwrap_or(c.seed))
        }
    }
}

/// Runs a command end to end: reads the config, computes on a pool of
/// `workers` threads, writes the CSV and sidecars.
pub fn execute(opts: &RunOptions) -> CliResult<()> {
    let text = std::fs::read_to_string(&opts.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", opts.config.display())))?;
    let config_dir = opts.config.parent().unwrap_or(Path::new("."));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        if w == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let report = pool.install(|| run_command(opts.command, &text, config_dir, opts.seed))?;

    let stamp = opts
        .timestamp
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let csv = report.table.render(stamp.as_deref());
    match &opts.out {
        Some(out) => {
            write_file(out, &csv)?;
            for (suffix, json) in &report.sidecars {
                write_file(&sidecar_path(out, suffix), json)?;
            }
        }
        None => {
            print!("{csv}");
            for (suffix, json) in &report.sidecars {
                eprintln!("{suffix}: {json}");
            }
        }
    }
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
