//! Lifetime of a decaying, possibly oscillating, trajectory.
//!
//! The upper envelope is the piecewise-linear interpolation between interior
//! local maxima, never below the trajectory itself. Outside the span of the
//! local maxima the envelope is the trajectory.

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Survival {
    /// The envelope stays at or below the threshold from this time on.
    Time(f64),
    /// The envelope still exceeds the threshold at the last sample.
    BeyondHorizon,
}

impl Survival {
    pub fn time(&self) -> Option<f64> {
        match self {
            Survival::Time(t) => Some(*t),
            Survival::BeyondHorizon => None,
        }
    }
}

/// Upper envelope of `values`, same length.
pub fn envelope(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let peaks: Vec<usize> =
        (1..n.saturating_sub(1)).filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1]).collect();
    let mut env = values.to_vec();
    for pair in peaks.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        let (vi, vj) = (values[i], values[j]);
        for (offset, slot) in env[i + 1..j].iter_mut().enumerate() {
            let frac = (offset + 1) as f64 / (j - i) as f64;
            *slot = slot.max(vi + frac * (vj - vi));
        }
    }
    env
}

/// Survival time of a trajectory sampled at `t_k = k dt`.
pub fn survival_time(values: &[f64], dt: f64, threshold: f64) -> Result<Survival> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(CoreError::InvalidParameter { name: "threshold", reason: format!("must be > 0, got {threshold}") });
    }
    if dt.is_nan() || dt <= 0.0 {
        return Err(CoreError::InvalidParameter { name: "dt", reason: format!("must be > 0, got {dt}") });
    }
    let env = envelope(values);
    match env.iter().rposition(|&v| v > threshold) {
        None => Ok(Survival::Time(0.0)),
        Some(k) if k + 1 == env.len() => Ok(Survival::BeyondHorizon),
        Some(k) => Ok(Survival::Time((k + 1) as f64 * dt)),
    }
}

/// Samples `f` on `[0, horizon]` with step `dt`, doubling the horizon until
/// the survival time falls inside it or `max_horizon` is reached. A curve that
/// has not yet reached the threshold but is still at its running maximum also
/// triggers a longer horizon.
pub fn survival_time_adaptive<F: Fn(f64) -> f64>(
    f: F,
    dt: f64,
    threshold: f64,
    initial_horizon: f64,
    max_horizon: f64,
) -> Result<Survival> {
    let mut horizon = initial_horizon.max(dt);
    loop {
        let n = (horizon / dt).floor() as usize + 1;
        let values: Vec<f64> = (0..n).map(|k| f(k as f64 * dt)).collect();
        let s = survival_time(&values, dt, threshold)?;
        let last = values[n - 1];
        let still_rising = s == Survival::Time(0.0) && values.iter().all(|&v| v <= last) && last > values[0];
        if (s != Survival::BeyondHorizon && !still_rising) || horizon >= max_horizon {
            return Ok(s);
        }
        horizon = (2.0 * horizon).min(max_horizon);
    }
}
