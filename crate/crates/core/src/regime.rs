//! Validity checks for treating the qubit's motion as a classical trajectory.
//!
//! Warnings never block a computation; they are attached to sweep output.

use std::f64::consts::PI;
use std::fmt;

use crate::params::PhysicalParams;
use crate::{PLANCK, REDUCED_PLANCK, SPEED_OF_LIGHT};

/// Mass of a rubidium-85 atom, kg.
pub const RB85_MASS_KG: f64 = 84.911_789_738 * 1.660_539_066_60e-27;

/// Transition frequencies below this (Hz) count as microwave qubits.
pub const MICROWAVE_OPTICAL_BOUNDARY: f64 = 1e13;
/// Minimum velocity (m/s) for a classical trajectory of a microwave qubit.
pub const MICROWAVE_MIN_VELOCITY: f64 = 1e-7;
/// Minimum velocity (m/s) for a classical trajectory of an optical qubit.
pub const OPTICAL_MIN_VELOCITY: f64 = 1e-3;
/// "Much greater / much smaller" is read as one decade.
pub const DECADE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum RegimeWarning {
    /// Velocity is not well above the band's classical-motion threshold.
    SlowMotion { velocity: f64, threshold: f64, band: Band },
    /// De Broglie wavelength not small against the transition wavelength.
    DeBroglie { ratio: f64 },
    /// Photon momentum not small against the atomic momentum.
    Recoil { ratio: f64 },
    /// The reservoir model assumes zero temperature.
    FiniteTemperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Microwave,
    Optical,
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::SlowMotion { velocity, threshold, band } => write!(
                f,
                "classical motion: v = {velocity:.3e} m/s is not much greater than {threshold:.0e} m/s ({band:?} qubit)"
            ),
            RegimeWarning::DeBroglie { ratio } => {
                write!(f, "classical motion: de Broglie / transition wavelength = {ratio:.3e} is not much less than 1")
            }
            RegimeWarning::Recoil { ratio } => {
                write!(f, "recoil: photon / atomic momentum = {ratio:.3e} is not much less than 1")
            }
            RegimeWarning::FiniteTemperature => write!(f, "reservoir assumed at zero temperature"),
        }
    }
}

/// Collects warnings for `params` and an atom of mass `mass_kg`.
/// `zero_temperature` states whether the reservoir is known to be at zero
/// temperature, which the model assumes.
pub fn validate_regime(params: &PhysicalParams, mass_kg: f64, zero_temperature: bool) -> Vec<RegimeWarning> {
    let mut warnings = Vec::new();
    if !zero_temperature {
        warnings.push(RegimeWarning::FiniteTemperature);
    }
    // a stationary qubit has no trajectory to validate
    if params.beta() == 0.0 {
        return warnings;
    }
    let v = params.velocity();
    let (band, threshold) = if params.omega0() < MICROWAVE_OPTICAL_BOUNDARY {
        (Band::Microwave, MICROWAVE_MIN_VELOCITY)
    } else {
        (Band::Optical, OPTICAL_MIN_VELOCITY)
    };
    if v < DECADE * threshold {
        warnings.push(RegimeWarning::SlowMotion { velocity: v, threshold, band });
    }
    if mass_kg > 0.0 {
        let de_broglie = PLANCK / (mass_kg * v);
        let transition = 2.0 * PI * SPEED_OF_LIGHT / params.omega0();
        let ratio = de_broglie / transition;
        if ratio * DECADE > 1.0 {
            warnings.push(RegimeWarning::DeBroglie { ratio });
        }
        let recoil = REDUCED_PLANCK * params.omega0() / SPEED_OF_LIGHT / (mass_kg * v);
        if recoil * DECADE > 1.0 {
            warnings.push(RegimeWarning::Recoil { ratio: recoil });
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rydberg_qubit_at_centimetres_per_second() {
        let p = PhysicalParams::reference(1e-10).unwrap();
        assert!((p.velocity() - 0.03).abs() < 1e-3);
        assert!(validate_regime(&p, RB85_MASS_KG, true).is_empty());
    }

    #[test]
    fn rydberg_qubit_too_slow() {
        let p = PhysicalParams::reference(1e-16).unwrap();
        let w = validate_regime(&p, RB85_MASS_KG, true);
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::SlowMotion { band: Band::Microwave, .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::DeBroglie { .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::Recoil { .. })));
    }

    #[test]
    fn stationary_qubit_is_valid() {
        let p = PhysicalParams::reference(0.0).unwrap();
        assert!(validate_regime(&p, RB85_MASS_KG, true).is_empty());
        assert_eq!(validate_regime(&p, RB85_MASS_KG, false), vec![RegimeWarning::FiniteTemperature]);
    }

    #[test]
    fn optical_band_threshold() {
        // 1e15 Hz optical qubit moving at 3 mm/s: below ten times 1 mm/s
        let p = PhysicalParams::new(1e8, 1e6, 0.0, 1e15, 1e-11, 1.0).unwrap();
        let w = validate_regime(&p, 0.0, true);
        assert!(matches!(w.as_slice(), [RegimeWarning::SlowMotion { band: Band::Optical, .. }]));
        let fast = p.with_beta(1e-9).unwrap();
        assert!(validate_regime(&fast, 0.0, true).is_empty());
    }
}
