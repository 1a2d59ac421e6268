//! Model constants for a qubit crossing a Lorentzian leaky cavity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Decay-rate constant of the reference Rydberg microwave qubit, in Hz.
pub const REFERENCE_GAMMA: f64 = 33.3;
/// Transition frequency of the reference Rydberg microwave qubit, in Hz.
pub const REFERENCE_OMEGA0: f64 = 51.1e9;
/// Spectral width used for the reference figures, as a fraction of gamma.
pub const REFERENCE_LAMBDA_OVER_GAMMA: f64 = 0.01;

/// Physical constants of the model. All frequencies are in Hz (1/s), the
/// velocity is the dimensionless ratio `v/c` and `theta` is the mixing angle of
/// the initial state `cos(theta/2)|a> + sin(theta/2)|b>`.
///
/// Fields are private and every instance satisfies the validity
/// invariants; the derived dimensionless groups are computed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PhysicalParams {
    gamma: f64,
    lambda: f64,
    delta: f64,
    omega0: f64,
    beta: f64,
    theta: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    gamma: f64,
    lambda: f64,
    delta: f64,
    omega0: f64,
    beta: f64,
    theta: f64,
}

impl TryFrom<RawParams> for PhysicalParams {
    type Error = CoreError;

    fn try_from(r: RawParams) -> Result<Self> {
        PhysicalParams::new(r.gamma, r.lambda, r.delta, r.omega0, r.beta, r.theta)
    }
}

impl From<PhysicalParams> for RawParams {
    fn from(p: PhysicalParams) -> Self {
        RawParams { gamma: p.gamma, lambda: p.lambda, delta: p.delta, omega0: p.omega0, beta: p.beta, theta: p.theta }
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> CoreError {
    CoreError::InvalidParameter { name, reason: reason.into() }
}

impl PhysicalParams {
    pub fn new(gamma: f64, lambda: f64, delta: f64, omega0: f64, beta: f64, theta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", format!("must be finite and > 0, got {gamma}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda", format!("must be finite and > 0, got {lambda}")));
        }
        if !delta.is_finite() {
            return Err(invalid("delta", format!("must be finite, got {delta}")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(invalid("omega0", format!("must be finite and > 0, got {omega0}")));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(invalid("beta", format!("must lie in [0, 1), got {beta}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid("theta", format!("must lie in [0, pi], got {theta}")));
        }
        Ok(Self { gamma, lambda, delta, omega0, beta, theta })
    }

    /// Parameters used by every figure of the reference study:
    /// `lambda = 0.01 gamma`, resonance, `theta = pi/2`, `omega0 = 51.1e9 Hz`.
    pub fn reference(beta: f64) -> Result<Self> {
        Self::new(REFERENCE_GAMMA, REFERENCE_LAMBDA_OVER_GAMMA * REFERENCE_GAMMA, 0.0, REFERENCE_OMEGA0, beta, PI / 2.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.gamma, self.lambda, self.delta, self.omega0, beta, self.theta)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.gamma, self.lambda, self.delta, self.omega0, self.beta, theta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.gamma, self.lambda, delta, self.omega0, self.beta, self.theta)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.gamma, lambda, self.delta, self.omega0, self.beta, self.theta)
    }

    /// `y1 = lambda / gamma`
    pub fn y1(&self) -> f64 {
        self.lambda / self.gamma
    }
    /// `y2 = omega0 / gamma`
    pub fn y2(&self) -> f64 {
        self.omega0 / self.gamma
    }
    /// `y3 = delta / gamma`
    pub fn y3(&self) -> f64 {
        self.delta / self.gamma
    }

    /// `u+ = (1 + beta) y1 + i beta y2 - i (1 + beta) y3`
    pub fn u_plus(&self) -> Complex64 {
        let b = self.beta;
        Complex64::new((1.0 + b) * self.y1(), b * self.y2() - (1.0 + b) * self.y3())
    }

    /// `u- = (1 - beta) y1 - i beta y2 - i (1 - beta) y3`
    pub fn u_minus(&self) -> Complex64 {
        let b = self.beta;
        Complex64::new((1.0 - b) * self.y1(), -b * self.y2() - (1.0 - b) * self.y3())
    }

    /// Complex width `lambda - i delta` of the memory kernel, in Hz.
    pub fn lambda_bar(&self) -> Complex64 {
        Complex64::new(self.lambda, -self.delta)
    }

    /// Motional frequency `beta (lambda_bar + i omega0)` of the memory kernel, in Hz.
    pub fn theta_bar(&self) -> Complex64 {
        self.beta * (self.lambda_bar() + Complex64::new(0.0, self.omega0))
    }

    /// Cavity centre frequency `omega0 - delta`.
    pub fn cavity_frequency(&self) -> f64 {
        self.omega0 - self.delta
    }

    /// Velocity in m/s.
    pub fn velocity(&self) -> f64 {
        self.beta * crate::SPEED_OF_LIGHT
    }

    /// Converts a dimensionless time `gamma t` to seconds.
    pub fn seconds(&self, gamma_t: f64) -> f64 {
        gamma_t / self.gamma
    }

    /// Converts seconds to the dimensionless time `gamma t`.
    pub fn scaled(&self, t: f64) -> f64 {
        t * self.gamma
    }
}
