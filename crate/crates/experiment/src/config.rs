//! Sweep configuration: `key = value` lines grouped under `[params]`,
//! `[sweep]` and `[regime]` headers.
//!
//! ```text
//! [params]
//! gamma = 33.3
//! lambda = 0.333
//! theta = 1.5707963267948966
//!
//! [sweep]
//! beta_list = [0.0, 0.1e-9]
//! observables = ["witness_opt", "coherence"]
//! output_dir = "out/fig3"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use movq::params::{REFERENCE_GAMMA, REFERENCE_LAMBDA_OVER_GAMMA, REFERENCE_OMEGA0};
use movq::regime::RB85_MASS_KG;
use movq::volterra::check_step;
use movq::{ClosedKernel, MemoryKernel, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Amplitude,
    WitnessX,
    WitnessOpt,
    Coherence,
    Entropy,
    Purity,
    Qfi,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Observable::Amplitude,
        Observable::WitnessX,
        Observable::WitnessOpt,
        Observable::Coherence,
        Observable::Entropy,
        Observable::Purity,
        Observable::Qfi,
    ];

    /// Column header in emitted tables.
    pub fn column(&self) -> &'static str {
        match self {
            Observable::Amplitude => "abs_A",
            Observable::WitnessX => "w_x",
            Observable::WitnessOpt => "w_opt",
            Observable::Coherence => "c_l1",
            Observable::Entropy => "S",
            Observable::Purity => "P",
            Observable::Qfi => "F",
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            Observable::Amplitude => "amplitude",
            Observable::WitnessX => "witness_x",
            Observable::WitnessOpt => "witness_opt",
            Observable::Coherence => "coherence",
            Observable::Entropy => "entropy",
            Observable::Purity => "purity",
            Observable::Qfi => "qfi",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Observable {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.key() == s)
            .ok_or_else(|| ExperimentError::config("sweep.observables", format!("unknown observable {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ParamsSection {
    gamma: f64,
    lambda: f64,
    delta: f64,
    omega0: f64,
    theta: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        Self {
            gamma: REFERENCE_GAMMA,
            lambda: REFERENCE_LAMBDA_OVER_GAMMA * REFERENCE_GAMMA,
            delta: 0.0,
            omega0: REFERENCE_OMEGA0,
            theta: std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    beta_list: Vec<f64>,
    #[serde(default = "default_t_max")]
    gamma_t_max: f64,
    #[serde(default = "default_dt")]
    gamma_dt: f64,
    #[serde(default = "default_observables")]
    observables: Vec<String>,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    #[serde(default)]
    oracle: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RegimeSection {
    mass_kg: f64,
    zero_temperature: bool,
}

impl Default for RegimeSection {
    fn default() -> Self {
        Self { mass_kg: RB85_MASS_KG, zero_temperature: true }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    params: ParamsSection,
    sweep: SweepSection,
    #[serde(default)]
    regime: RegimeSection,
}

fn default_t_max() -> f64 {
    50.0
}

fn default_dt() -> f64 {
    0.025
}

fn default_observables() -> Vec<String> {
    Observable::ALL.iter().map(|o| o.key().to_string()).collect()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Validated sweep description. Times are in units of `1/gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: PhysicalParams,
    pub beta_list: Vec<f64>,
    pub gamma_t_max: f64,
    pub gamma_dt: f64,
    pub observables: Vec<Observable>,
    pub output_dir: PathBuf,
    /// Use the Volterra solver for `A(t)` instead of the closed form.
    pub oracle: bool,
    pub mass_kg: f64,
    pub zero_temperature: bool,
}

impl SweepConfig {
    /// Reference parameters with the given velocities and observables.
    pub fn reference(
        beta_list: Vec<f64>,
        observables: Vec<Observable>,
        output_dir: impl Into<PathBuf>,
    ) -> Result<Self> {
        let cfg = SweepConfig {
            base: PhysicalParams::reference(0.0).map_err(|e| ExperimentError::model("params", e))?,
            beta_list,
            gamma_t_max: default_t_max(),
            gamma_dt: default_dt(),
            observables,
            output_dir: output_dir.into(),
            oracle: false,
            mass_kg: RB85_MASS_KG,
            zero_temperature: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| ExperimentError::Parse(e.to_string()))?;
        let p = &file.params;
        let base = PhysicalParams::new(p.gamma, p.lambda, p.delta, p.omega0, 0.0, p.theta)
            .map_err(|e| ExperimentError::model("params", e))?;
        let observables = file.sweep.observables.iter().map(|s| s.parse()).collect::<Result<Vec<Observable>>>()?;
        let cfg = SweepConfig {
            base,
            beta_list: file.sweep.beta_list,
            gamma_t_max: file.sweep.gamma_t_max,
            gamma_dt: file.sweep.gamma_dt,
            observables,
            output_dir: file.sweep.output_dir,
            oracle: file.sweep.oracle,
            mass_kg: file.regime.mass_kg,
            zero_temperature: file.regime.zero_temperature,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta_list.is_empty() {
            return Err(ExperimentError::config("sweep.beta_list", "must not be empty"));
        }
        for (i, &beta) in self.beta_list.iter().enumerate() {
            self.params_for(beta).map_err(|e| match e {
                ExperimentError::Model { source, .. } => {
                    ExperimentError::model(format!("sweep.beta_list[{i}]"), source)
                }
                other => other,
            })?;
        }
        for (i, beta) in self.beta_list.iter().enumerate() {
            if self.beta_list[..i].contains(beta) {
                return Err(ExperimentError::config("sweep.beta_list", format!("{beta:e} listed twice")));
            }
        }
        if !(self.gamma_t_max.is_finite() && self.gamma_t_max > 0.0) {
            return Err(ExperimentError::config(
                "sweep.gamma_t_max",
                format!("must be positive, got {}", self.gamma_t_max),
            ));
        }
        if !(self.gamma_dt > 0.0 && self.gamma_dt <= self.gamma_t_max) {
            return Err(ExperimentError::config(
                "sweep.gamma_dt",
                format!("must lie in (0, gamma_t_max], got {}", self.gamma_dt),
            ));
        }
        if self.observables.is_empty() {
            return Err(ExperimentError::config("sweep.observables", "must not be empty"));
        }
        for (i, o) in self.observables.iter().enumerate() {
            if self.observables[..i].contains(o) {
                return Err(ExperimentError::config("sweep.observables", format!("{o} listed twice")));
            }
        }
        if self.mass_kg.is_nan() || self.mass_kg <= 0.0 {
            return Err(ExperimentError::config("regime.mass_kg", format!("must be positive, got {}", self.mass_kg)));
        }
        if self.oracle {
            for &beta in &self.beta_list {
                let params = self.params_for(beta)?;
                let rate = ClosedKernel::new(params).max_rate();
                check_step(rate, params.seconds(self.gamma_dt))
                    .map_err(|e| ExperimentError::model(format!("sweep.gamma_dt (beta = {beta:e})"), e))?;
            }
        }
        Ok(())
    }

    pub fn params_for(&self, beta: f64) -> Result<PhysicalParams> {
        self.base.with_beta(beta).map_err(|e| ExperimentError::model("sweep.beta_list", e))
    }

    /// Grid `0, dt, 2 dt, ...` up to `gamma_t_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let n = (self.gamma_t_max / self.gamma_dt + 1e-9).floor() as usize;
        (0..=n).map(|k| k as f64 * self.gamma_dt).collect()
    }

    /// Round-trippable text form, echoed into every output header.
    pub fn to_config_string(&self) -> String {
        let file = ConfigFile {
            params: ParamsSection {
                gamma: self.base.gamma(),
                lambda: self.base.lambda(),
                delta: self.base.delta(),
                omega0: self.base.omega0(),
                theta: self.base.theta(),
            },
            sweep: SweepSection {
                beta_list: self.beta_list.clone(),
                gamma_t_max: self.gamma_t_max,
                gamma_dt: self.gamma_dt,
                observables: self.observables.iter().map(|o| o.key().to_string()).collect(),
                output_dir: self.output_dir.clone(),
                oracle: self.oracle,
            },
            regime: RegimeSection { mass_kg: self.mass_kg, zero_temperature: self.zero_temperature },
        };
        toml::to_string(&file).expect("config sections serialise")
    }
}
