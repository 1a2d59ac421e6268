//! Cross-checks of every closed form against an independent route.

use movq::metrology::{encode_phase, phase_derivative, qfi_spectral, PhaseProbe};
use movq::volterra::check_step;
use movq::witness::{witness_generic, witness_optimized, witness_x_closed, BlindMeasurement, WitnessOptions};
use movq::{
    solve_volterra, Amplitude, ClosedKernel, Complex64, MemoryKernel, MonicCubic, PhysicalParams, QubitEvolution,
};
use serde::Serialize;

use crate::config::SweepConfig;
use crate::error::{ExperimentError, Result};

pub const AMPLITUDE_TOLERANCE: f64 = 1e-4;
pub const CUBIC_TOLERANCE: f64 = 1e-10;
pub const WITNESS_TOLERANCE: f64 = 1e-12;
pub const QFI_TOLERANCE: f64 = 1e-6;
const QFI_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub beta: f64,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, beta: f64, value: f64, tolerance: f64) -> Self {
        // NaN never passes
        Check { name: name.to_string(), beta, value, tolerance, passed: value <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        VerifyReport { passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// What to verify: a base parameter set, velocities and the oracle grid in
/// units of `1/gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub base: PhysicalParams,
    pub betas: Vec<f64>,
    pub gamma_t_max: f64,
    pub gamma_dt: f64,
    pub grid_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            base: PhysicalParams::reference(0.0).expect("reference parameters are valid"),
            betas: vec![0.0, 0.01e-9, 0.05e-9, 0.1e-9, 0.5e-9, 0.7e-9, 1e-9],
            gamma_t_max: 50.0,
            gamma_dt: 0.01,
            grid_points: 200,
        }
    }
}

impl From<&SweepConfig> for VerifyOptions {
    fn from(cfg: &SweepConfig) -> Self {
        VerifyOptions {
            base: cfg.base,
            betas: cfg.beta_list.clone(),
            gamma_t_max: cfg.gamma_t_max,
            gamma_dt: cfg.gamma_dt,
            ..VerifyOptions::default()
        }
    }
}

/// Roots of `candidate` scored against `reference`: the largest relative residual.
pub fn cubic_residual(reference: &MonicCubic, candidate: &MonicCubic) -> f64 {
    candidate.roots().iter().map(|&x| reference.relative_residual(x)).fold(0.0, f64::max)
}

pub fn amplitude_check(params: &PhysicalParams, gamma_t_max: f64, gamma_dt: f64) -> Result<Check> {
    let evolution = QubitEvolution::new(*params).map_err(|e| ExperimentError::model("params", e))?;
    let grid = solve_volterra(&ClosedKernel::new(*params), params.seconds(gamma_t_max), params.seconds(gamma_dt))
        .map_err(|e| ExperimentError::model("gamma_dt", e))?;
    let dev = grid.iter().map(|(t, a)| (a - evolution.amplitude_at(t)).norm()).fold(0.0, f64::max);
    Ok(Check::new("amplitude_vs_volterra", params.beta(), dev, AMPLITUDE_TOLERANCE))
}

pub fn cubic_check(params: &PhysicalParams) -> Check {
    let cubic = MonicCubic::characteristic(params);
    let mut value = cubic_residual(&cubic, &cubic);
    if params.beta() == 0.0 {
        // the stationary cubic has the exact root -(y1 - i y3)
        let exact = -Complex64::new(params.y1(), -params.y3());
        let miss = cubic.roots().iter().map(|r| (r - exact).norm()).fold(f64::INFINITY, f64::min);
        value = value.max(miss / exact.norm().max(1.0));
    }
    Check::new("cubic_residual", params.beta(), value, CUBIC_TOLERANCE)
}

pub fn witness_check(evolution: &QubitEvolution, taus: &[f64]) -> Result<Check> {
    let opts = WitnessOptions::default();
    let mut dev = 0.0f64;
    for &tau in taus {
        let x = witness_generic(tau, BlindMeasurement::X, evolution, &opts)
            .map_err(|e| ExperimentError::model("tau", e))?;
        let z = witness_generic(tau, BlindMeasurement::Z, evolution, &opts)
            .map_err(|e| ExperimentError::model("tau", e))?;
        dev = dev.max((x.w - witness_x_closed(tau, evolution)).abs());
        dev = dev.max((z.w - witness_optimized(tau, evolution)).abs());
    }
    Ok(Check::new("witness_pipeline", evolution.params().beta(), dev, WITNESS_TOLERANCE))
}

pub fn qfi_check(evolution: &QubitEvolution, times: &[f64]) -> Result<Check> {
    let theta = evolution.theta();
    let phi = 1.0;
    let mut worst = 0.0f64;
    for &t in times {
        let probe = |p: f64| PhaseProbe::new(theta, p, t).map_err(|e| ExperimentError::model("qfi", e));
        let rho = encode_phase(&probe(phi)?, evolution);
        let plus = encode_phase(&probe(phi + QFI_STEP)?, evolution).matrix();
        let minus = encode_phase(&probe(phi - QFI_STEP)?, evolution).matrix();
        let mut fd = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                fd[i][j] = (plus[i][j] - minus[i][j]) / (2.0 * QFI_STEP);
            }
        }
        let spectral = qfi_spectral(&rho.matrix(), &phase_derivative(&rho));
        let numeric = qfi_spectral(&rho.matrix(), &fd);
        worst = worst.max((spectral - numeric).abs());
    }
    Ok(Check::new("qfi_finite_difference", evolution.params().beta(), worst, QFI_TOLERANCE))
}

/// Runs every check. A grid too coarse for the Volterra solver is an error,
/// never a silent pass.
pub fn verify(options: &VerifyOptions) -> Result<VerifyReport> {
    if options.betas.is_empty() {
        return Err(ExperimentError::config("sweep.beta_list", "must not be empty"));
    }
    let mut params_list = Vec::new();
    for &beta in &options.betas {
        let params = options.base.with_beta(beta).map_err(|e| ExperimentError::model("sweep.beta_list", e))?;
        check_step(ClosedKernel::new(params).max_rate(), params.seconds(options.gamma_dt))
            .map_err(|e| ExperimentError::model(format!("sweep.gamma_dt (beta = {beta:e})"), e))?;
        params_list.push(params);
    }

    let mut checks = Vec::new();
    for params in &params_list {
        let amplitude = Amplitude::resolve(params, params.seconds(options.gamma_t_max))
            .map_err(|e| ExperimentError::model("params", e))?;
        let evolution = QubitEvolution::from_parts(*params, amplitude);
        if !evolution.amplitude().is_fallback() {
            checks.push(amplitude_check(params, options.gamma_t_max, options.gamma_dt)?);
        }
        checks.push(cubic_check(params));
        let step = options.gamma_t_max / (options.grid_points.max(2) - 1) as f64;
        let times: Vec<f64> = (0..options.grid_points.max(2)).map(|k| params.seconds(k as f64 * step)).collect();
        checks.push(witness_check(&evolution, &times)?);
        checks.push(qfi_check(&evolution, &times)?);
    }
    Ok(VerifyReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_coefficient_fails_residual_check() {
        let p = PhysicalParams::reference(0.1e-9).unwrap();
        let good = MonicCubic::characteristic(&p);
        assert!(cubic_residual(&good, &good) <= CUBIC_TOLERANCE);
        let mut bad = good;
        bad.a0 *= 1.001;
        assert!(cubic_residual(&good, &bad) > CUBIC_TOLERANCE);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let options = VerifyOptions { betas: vec![1e-9], gamma_dt: 0.1, ..VerifyOptions::default() };
        match verify(&options) {
            Err(ExperimentError::Model { field, .. }) => assert!(field.starts_with("sweep.gamma_dt")),
            other => panic!("expected a step rejection, got {other:?}"),
        }
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Check::new("x", 0.0, f64::NAN, 1.0).passed);
    }

    #[test]
    fn small_run_passes_and_serialises() {
        let options =
            VerifyOptions { betas: vec![0.0, 0.1e-9], gamma_t_max: 10.0, grid_points: 20, ..VerifyOptions::default() };
        let report = verify(&options).unwrap();
        assert!(report.passed, "{}", report.to_json());
        assert_eq!(report.checks.len(), 8);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["passed"], true);
    }
}
