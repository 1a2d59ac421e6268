//! Quantum witness `|p(tau) - p'(tau)|` for a final projection on |+>, with a
//! nonselective blind measurement at an intermediate time.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::kernel::ClosedKernel;
use crate::qubit::{l1_coherence, BlochVector, DensityMatrix2, PauliPropagator, QubitEvolution};
use crate::table::Table;
use crate::volterra::{solve_volterra, MemoryKernel};

pub use crate::survival::{survival_time, Survival};

/// Basis of the intermediate nonselective projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlindMeasurement {
    /// Projectors `(1 +- sigma_x)/2`.
    X,
    /// Projectors `(1 +- sigma_z)/2`; removes all coherence.
    Z,
}

/// `Pi_+ rho Pi_+ + Pi_- rho Pi_-` in the chosen basis.
pub fn blind_measure(rho: &DensityMatrix2, m: BlindMeasurement) -> DensityMatrix2 {
    let b = rho.bloch();
    let projected = match m {
        BlindMeasurement::X => BlochVector::new(b.x, 0.0, 0.0),
        BlindMeasurement::Z => BlochVector::new(0.0, 0.0, b.z),
    };
    // dropping Bloch components never leaves the ball
    DensityMatrix2::from_bloch(projected).expect("projected state is physical")
}

/// How the blind-measured state is carried from the measurement time to `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentMap {
    /// Reuse the map `Omega(tau - t_m, 0)` built from the amplitude at the
    /// segment length. This is the convention behind the closed forms.
    Homogeneous,
    /// Re-solve the amplitude equation on `[t_m, tau]` with the memory
    /// cleared at `t_m`, using the given step (seconds). Sensitivity studies
    /// only; the closed forms do not follow this convention.
    MemoryReset { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOptions {
    /// Measurement time as a fraction of `tau`.
    pub fraction: f64,
    pub segment_map: SegmentMap,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self { fraction: 0.5, segment_map: SegmentMap::Homogeneous }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessPoint {
    pub tau: f64,
    pub p_quantum: f64,
    pub p_classical: f64,
    pub w: f64,
}

/// Probability of finding |+>: `Tr[rho (1 + sigma_x)/2]`.
pub fn prob_plus(rho: &DensityMatrix2) -> f64 {
    0.5 * (1.0 + rho.bloch().x)
}

/// Witness at `tau` (seconds) by explicit state construction.
pub fn witness_generic(
    tau: f64,
    m: BlindMeasurement,
    evolution: &QubitEvolution,
    options: &WitnessOptions,
) -> Result<WitnessPoint> {
    if tau.is_nan() || tau < 0.0 {
        return Err(CoreError::InvalidParameter { name: "tau", reason: format!("must be >= 0, got {tau}") });
    }
    if !(options.fraction > 0.0 && options.fraction < 1.0) {
        return Err(CoreError::InvalidParameter {
            name: "fraction",
            reason: format!("must lie in (0, 1), got {}", options.fraction),
        });
    }
    let t_m = options.fraction * tau;
    let p_quantum = prob_plus(&evolution.state(tau));

    let measured = blind_measure(&evolution.state(t_m), m);
    let segment = segment_amplitude(evolution, t_m, tau, &options.segment_map)?;
    let perturbed = PauliPropagator::from_amplitude(segment).apply_state(&measured)?;
    let p_classical = prob_plus(&perturbed);

    Ok(WitnessPoint { tau, p_quantum, p_classical, w: (p_quantum - p_classical).abs() })
}

fn segment_amplitude(evolution: &QubitEvolution, t_m: f64, tau: f64, map: &SegmentMap) -> Result<Complex64> {
    let length = tau - t_m;
    match *map {
        SegmentMap::Homogeneous => Ok(evolution.amplitude_at(length)),
        SegmentMap::MemoryReset { dt } => {
            let base = ClosedKernel::new(*evolution.params());
            let shifted = Shifted { inner: base, offset: t_m };
            let grid = solve_volterra(&shifted, length, dt)?;
            // the grid ends at floor(length/dt) dt; interpolate toward the end point
            let last = *grid.values().last().expect("grid holds at least A(0)");
            Ok(grid.interpolate(length).unwrap_or(last))
        }
    }
}

struct Shifted<K> {
    inner: K,
    offset: f64,
}

impl<K: MemoryKernel> MemoryKernel for Shifted<K> {
    fn eval(&self, t: f64, t_prime: f64) -> Complex64 {
        self.inner.eval(t + self.offset, t_prime + self.offset)
    }
    fn max_rate(&self) -> f64 {
        self.inner.max_rate()
    }
}

/// Closed-form witness for the x-basis blind measurement at `tau/2`:
/// `(1/4)|sin(theta) (A + A* - (1/2)(A_h + A_h*)^2)|`, `A_h = A(tau/2)`.
pub fn witness_x_closed(tau: f64, evolution: &QubitEvolution) -> f64 {
    let a = evolution.amplitude_at(tau);
    let a_half = evolution.amplitude_at(0.5 * tau);
    let sum = a + a.conj();
    let half_sum = a_half + a_half.conj();
    0.25 * (evolution.theta().sin() * (sum - 0.5 * half_sum * half_sum)).norm()
}

/// Optimised witness for the z-basis blind measurement: `(1/2)|sin(theta) Re A(tau)|`.
pub fn witness_optimized(tau: f64, evolution: &QubitEvolution) -> f64 {
    0.5 * (evolution.theta().sin() * evolution.amplitude_at(tau).re).abs()
}

/// Half the l1 coherence at `tau`, the upper bound on the witness.
pub fn coherence_half(tau: f64, evolution: &QubitEvolution) -> f64 {
    0.5 * l1_coherence(&evolution.state(tau))
}

/// Excited population after a z-basis measurement at `tau/2`, returned as
/// `(segment map, |A(tau)|^4 form)`, i.e. `cos^2(theta/2)|A(tau/2)|^4` and
/// `cos^2(theta/2)|A(tau)|^4`. The two coincide only for pure exponential decay.
pub fn perturbed_populations(tau: f64, evolution: &QubitEvolution) -> (f64, f64) {
    let c2 = (0.5 * evolution.theta()).cos().powi(2);
    let half = evolution.amplitude_at(0.5 * tau).norm_sqr();
    let full = evolution.amplitude_at(tau).norm_sqr();
    (c2 * half * half, c2 * full * full)
}

/// Witness curves on the grid `gamma tau = 0, step, ..., gamma_tau_max`:
/// columns `gamma_tau, w_x, w_opt, c_half`.
pub fn witness_table(evolution: &QubitEvolution, gamma_tau_max: f64, n_points: usize) -> Table {
    let mut table = Table::new(["gamma_tau", "w_x", "w_opt", "c_half"]);
    let p = evolution.params();
    for i in 0..n_points {
        let gt = gamma_tau_max * i as f64 / (n_points - 1).max(1) as f64;
        let tau = p.seconds(gt);
        table.push_row(vec![
            gt,
            witness_x_closed(tau, evolution),
            witness_optimized(tau, evolution),
            coherence_half(tau, evolution),
        ]);
    }
    table
}
