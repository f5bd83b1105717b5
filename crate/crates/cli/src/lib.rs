//! `relayperf`: end-to-end performance of dual-hop fixed-gain relay links
//! over Generalized-Gamma fading, from the command line.
//!
//! Subcommands sweep a scenario and emit CSV (header row, LF endings, 17
//! significant digits); `validate` runs the analytic-vs-oracle consistency
//! suite. Exit codes: 0 success, 1 validation failure, 2 configuration
//! error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod validate;

use clap::{Parser, Subcommand};
use config::Config;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "relayperf",
    about = "Dual-hop fixed-gain relay performance over Generalized-Gamma fading",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relay constant C versus first-hop SNR, per series.m1 value
    GainSweep(RunArgs),
    /// Average end-to-end SNR versus first-hop SNR, per balance ratio
    AvgSnr(RunArgs),
    /// Average bit error probability versus first-hop SNR, per scheme
    Abep(RunArgs),
    /// Outage probability versus gbar1/gamma_th, per balance ratio
    Outage(RunArgs),
    /// Run the full analytic/oracle validation suite
    Validate(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario file (flat `key = value` lines); defaults apply when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override single fields, e.g. --set hop1.m=3.5 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override sim.seed
    #[arg(long)]
    seed: Option<u64>,
}

const EXIT_OK: i32 = 0;
const EXIT_VALIDATION: i32 = 1;
const EXIT_CONFIG: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

fn load_config(args: &RunArgs) -> Result<Config, config::ConfigError> {
    let (text, origin) = match &args.config {
        Some(path) => (
            std::fs::read_to_string(path)
                .map_err(|e| config::ConfigError(format!("{}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        None => (String::new(), "<defaults>".to_string()),
    };
    let mut cfg = Config::from_text(&text, &origin, &args.sets)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn emit(args: &RunArgs, body: &str) -> std::io::Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let (args, runner): (&RunArgs, fn(&Config) -> relayperf_core::Result<String>) =
        match &cli.command {
            Command::GainSweep(a) => (a, commands::gain_sweep),
            Command::AvgSnr(a) => (a, commands::avg_snr),
            Command::Abep(a) => (a, commands::abep),
            Command::Outage(a) => (a, commands::outage),
            Command::Validate(a) => {
                // validate ignores the scenario beyond the seedless defaults
                if let Err(e) = load_config(a) {
                    eprintln!("{e}");
                    return EXIT_CONFIG;
                }
                let checks = validate::run_validation(0.0);
                let mut stdout = std::io::stdout();
                return match validate::render(&checks, &mut stdout) {
                    Ok(true) => EXIT_OK,
                    Ok(false) => EXIT_VALIDATION,
                    Err(e) => {
                        eprintln!("i/o error: {e}");
                        EXIT_NUMERICAL
                    }
                };
            }
        };
    let cfg = match load_config(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    match runner(&cfg) {
        Ok(body) => match emit(args, &body) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("i/o error: {e}");
                EXIT_NUMERICAL
            }
        },
        Err(e) => {
            eprintln!("numerical failure: {e}");
            EXIT_NUMERICAL
        }
    }
}
