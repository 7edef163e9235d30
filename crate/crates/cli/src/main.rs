use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cmixlab_cli::{execute, Command, RunOptions};

#[derive(Parser)]
#[command(
    name = "cmixlab",
    version,
    about = "Concentration and learning experiments on chaotic dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Simulate a trajectory, optionally with observation noise.
    Simulate(Common),
    /// Estimate correlation decay and fit a geometric mixing rate.
    Mixing(Common),
    /// Tabulate the tail bound next to the comparator bounds.
    Bound(Common),
    /// Monte Carlo check of the tail bound; exits 1 on any violation.
    Validate(Common),
    /// Excess risk against sample size and its log-log slope.
    Rates(Common),
    /// Train per-coordinate forecasters and estimate their risk.
    Forecast(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; sidecar JSON files are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Omit the `# generated_at=` line so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, c) = match cli.command {
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Mixing(c) => (Command::Mixing, c),
        Sub::Bound(c) => (Command::Bound, c),
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Rates(c) => (Command::Rates, c),
        Sub::Forecast(c) => (Command::Forecast, c),
    };
    let opts = RunOptions {
        command,
        config: c.config,
        out: c.out,
        seed: c.seed,
        workers: c.workers,
        timestamp: !c.no_timestamp,
    };
    match execute(&opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
