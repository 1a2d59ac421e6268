//! Exact reduced dynamics of a two-level atom moving at constant velocity
//! through a leaky cavity with a Lorentzian mode spectrum.
//!
//! The excited-state amplitude `A(t)` obeys a Volterra integro-differential
//! equation whose memory kernel depends on the atom's velocity. It is solved
//! in closed form through the roots of a cubic ([`amplitude`]) and, as an
//! independent check, by direct time stepping ([`volterra`]). Every other
//! observable (state, witnesses, entropy, Fisher information) is a function
//! of `A(t)`.

pub mod amplitude;
pub mod cubic;
pub mod error;
pub mod kernel;
pub mod metrology;
pub mod params;
pub mod qubit;
pub mod regime;
pub mod survival;
pub mod table;
pub mod volterra;
pub mod witness;

pub use amplitude::{amplitude_analytic, Amplitude, AmplitudeSolution};
pub use cubic::{cubic_roots, MonicCubic};
pub use error::{CoreError, Result};
pub use kernel::{kernel_closed, kernel_integral, spectral_density, ClosedKernel, Quadrature};
pub use metrology::{
    cramer_rao_bound, encode_phase, entropy_trajectory, qfi_phase, von_neumann_entropy, PhaseProbe, PhaseUncertainty,
};
pub use params::PhysicalParams;
pub use qubit::{evolved_state, l1_coherence, purity, BlochVector, DensityMatrix2, PauliPropagator, QubitEvolution};
pub use regime::{validate_regime, RegimeWarning};
pub use survival::{survival_time, Survival};
pub use table::Table;
pub use volterra::{convergence_report, solve_volterra, MemoryKernel, VolterraGrid};
pub use witness::{
    blind_measure, witness_generic, witness_optimized, witness_x_closed, BlindMeasurement, WitnessOptions, WitnessPoint,
};

pub use num_complex::Complex64;

/// m/s
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// J s
pub const PLANCK: f64 = 6.626_070_15e-34;
/// J s
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * std::f64::consts::PI);
