//! Parameter sweeps over the qubit velocity.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use movq::metrology::{qfi_phase, von_neumann_entropy, PhaseProbe};
use movq::witness::{witness_optimized, witness_x_closed};
use movq::{
    l1_coherence, purity, solve_volterra, validate_regime, Amplitude, ClosedKernel, QubitEvolution, RegimeWarning,
    Table,
};
use rayon::prelude::*;

use crate::config::{Observable, SweepConfig};
use crate::error::{ExperimentError, Result};

/// Environment variable overriding the number of sweep workers.
pub const WORKERS_ENV: &str = "MOVQ_WORKERS";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct BetaRun {
    pub beta: f64,
    pub table: Table,
    pub warnings: Vec<RegimeWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub runs: Vec<BetaRun>,
}

/// Value of `observable` at `t` seconds.
pub fn observe(observable: Observable, evolution: &QubitEvolution, t: f64) -> Result<f64> {
    let v = match observable {
        Observable::Amplitude => evolution.amplitude_at(t).norm(),
        Observable::WitnessX => witness_x_closed(t, evolution),
        Observable::WitnessOpt => witness_optimized(t, evolution),
        Observable::Coherence => l1_coherence(&evolution.state(t)),
        Observable::Entropy => {
            von_neumann_entropy(&evolution.state(t)).map_err(|e| ExperimentError::model("entropy", e))?
        }
        Observable::Purity => purity(&evolution.state(t)),
        Observable::Qfi => {
            let probe = PhaseProbe::new(evolution.theta(), 0.0, t).map_err(|e| ExperimentError::model("qfi", e))?;
            qfi_phase(&probe, evolution)
        }
    };
    Ok(v)
}

fn evolution_for(config: &SweepConfig, beta: f64) -> Result<(QubitEvolution, &'static str)> {
    let params = config.params_for(beta)?;
    let horizon = params.seconds(config.gamma_t_max);
    if config.oracle {
        let grid = solve_volterra(&ClosedKernel::new(params), horizon, params.seconds(config.gamma_dt))
            .map_err(|e| ExperimentError::model("oracle", e))?;
        return Ok((QubitEvolution::from_parts(params, Amplitude::Numerical(Arc::new(grid))), "volterra oracle"));
    }
    let evo =
        QubitEvolution::with_fallback_horizon(params, horizon).map_err(|e| ExperimentError::model("params", e))?;
    let method = if evo.amplitude().is_fallback() { "volterra fallback (degenerate roots)" } else { "closed form" };
    Ok((evo, method))
}

fn run_beta(config: &SweepConfig, beta: f64) -> Result<BetaRun> {
    let (evolution, method) = evolution_for(config, beta)?;
    let params = *evolution.params();
    let warnings = validate_regime(&params, config.mass_kg, config.zero_temperature);

    let mut table = Table::new(std::iter::once("gamma_t").chain(config.observables.iter().map(|o| o.column())));
    table.add_comment(format!("movq-experiment {VERSION}"));
    table.add_comment(format!("beta = {beta:e}"));
    table.add_comment(format!("amplitude = {method}"));
    for w in &warnings {
        table.add_comment(format!("warning: {w}"));
    }
    table.add_comment("config:");
    table.add_comment(config.to_config_string());

    for gt in config.grid() {
        let t = params.seconds(gt);
        let mut row = Vec::with_capacity(config.observables.len() + 1);
        row.push(gt);
        for &o in &config.observables {
            row.push(observe(o, &evolution, t)?);
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(ExperimentError::config(
                "sweep",
                format!("non-finite value {bad} at beta = {beta:e}, gamma t = {gt}"),
            ));
        }
        table.push_row(row);
    }
    Ok(BetaRun { beta, table, warnings })
}

/// Worker count from the environment, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// One worker per velocity; results come back in `beta_list` order.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count().min(config.beta_list.len()))
        .build()
        .expect("thread pool with a positive worker count");
    let runs =
        pool.install(|| config.beta_list.par_iter().map(|&beta| run_beta(config, beta)).collect::<Result<Vec<_>>>())?;
    Ok(SweepResult { config: config.clone(), runs })
}

pub fn beta_file_name(beta: f64) -> String {
    format!("beta_{beta:e}.csv")
}

/// Writes `tables` under `dir`, checking every target before touching any.
pub fn write_tables(dir: &Path, tables: &[(String, &Table)], force: bool) -> Result<Vec<PathBuf>> {
    let paths: Vec<PathBuf> = tables.iter().map(|(name, _)| dir.join(name)).collect();
    if !force {
        if let Some(p) = paths.iter().find(|p| p.exists()) {
            return Err(ExperimentError::Collision(p.clone()));
        }
    }
    fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    for (path, (_, table)) in paths.iter().zip(tables) {
        fs::write(path, table.to_csv_string()).map_err(|e| ExperimentError::io(path, e))?;
    }
    Ok(paths)
}

impl SweepResult {
    pub fn table(&self, beta: f64) -> Option<&Table> {
        self.runs.iter().find(|r| r.beta == beta).map(|r| &r.table)
    }

    /// One CSV per velocity under the configured output directory.
    pub fn write(&self, force: bool) -> Result<Vec<PathBuf>> {
        let tables: Vec<(String, &Table)> = self.runs.iter().map(|r| (beta_file_name(r.beta), &r.table)).collect();
        write_tables(&self.config.output_dir, &tables, force)
    }
}
