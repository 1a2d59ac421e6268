use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use movq::validate_regime;
use movq_experiment::{reproduce_figure, run_sweep, verify, ExperimentError, FigureId, SweepConfig, VerifyOptions};

/// Moving-qubit simulator: sweeps, figures and oracle checks.
#[derive(Debug, Parser)]
#[command(name = "movq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a velocity sweep described by a config file.
    Sweep {
        config: PathBuf,
        /// Replace existing output files.
        #[arg(long)]
        force: bool,
    },
    /// Write the CSV files and gnuplot script for one figure.
    Figure {
        id: String,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Cross-check closed forms against numerical oracles; prints JSON.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Report physical-regime warnings for every velocity in a config.
    Regime { config: PathBuf },
}

const VALIDATION_FAILURE: u8 = 1;
const BAD_INPUT: u8 = 2;

fn run(cli: Cli) -> Result<bool, ExperimentError> {
    match cli.command {
        Command::Sweep { config, force } => {
            let cfg = SweepConfig::load(&config)?;
            let result = run_sweep(&cfg)?;
            for path in result.write(force)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Figure { id, out, force } => {
            let id: FigureId = id.parse()?;
            for path in reproduce_figure(id, &out, force)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Verify { config } => {
            let options = match config {
                Some(path) => VerifyOptions::from(&SweepConfig::load(&path)?),
                None => VerifyOptions::default(),
            };
            let report = verify(&options)?;
            println!("{}", report.to_json());
            Ok(report.passed)
        }
        Command::Regime { config } => {
            let cfg = SweepConfig::load(&config)?;
            let mut clean = true;
            for &beta in &cfg.beta_list {
                let warnings = validate_regime(&cfg.params_for(beta)?, cfg.mass_kg, cfg.zero_temperature);
                if warnings.is_empty() {
                    println!("beta = {beta:e}: ok");
                }
                for w in warnings {
                    clean = false;
                    println!("beta = {beta:e}: {w}");
                }
            }
            Ok(clean)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(VALIDATION_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(BAD_INPUT)
        }
    }
}
