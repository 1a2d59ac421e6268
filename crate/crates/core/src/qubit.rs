//! Reduced qubit state, its Bloch representation and the Pauli-basis map.
//!
//! Basis order is (|a>, |b>) with |a> excited, so `sigma_z = |a><a| - |b><b|`.

use num_complex::Complex64;

use crate::amplitude::Amplitude;
use crate::error::{CoreError, Result};
use crate::params::PhysicalParams;

/// Allowed negative eigenvalue before a state is rejected.
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// A qubit density matrix stored by `rho_aa` and `rho_ab`; `rho_bb = 1 - rho_aa`
/// and `rho_ba = conj(rho_ab)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    rho_aa: f64,
    rho_ab: Complex64,
}

impl DensityMatrix2 {
    pub fn new(rho_aa: f64, rho_ab: Complex64) -> Result<Self> {
        if !(rho_aa.is_finite() && rho_ab.re.is_finite() && rho_ab.im.is_finite()) {
            return Err(CoreError::Unphysical(format!("non-finite entries ({rho_aa}, {rho_ab})")));
        }
        let rho = Self { rho_aa, rho_ab };
        let (low, _) = rho.eigenvalues();
        if low < -POSITIVITY_TOLERANCE {
            return Err(CoreError::Unphysical(format!("negative eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    pub fn from_bloch(b: BlochVector) -> Result<Self> {
        Self::new(0.5 * (1.0 + b.z), Complex64::new(0.5 * b.x, -0.5 * b.y))
    }

    pub fn maximally_mixed() -> Self {
        Self { rho_aa: 0.5, rho_ab: Complex64::new(0.0, 0.0) }
    }

    /// `cos(theta/2)|a> + sin(theta/2)|b>`.
    pub fn pure(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self { rho_aa: c * c, rho_ab: Complex64::new(s * c, 0.0) }
    }

    pub fn rho_aa(&self) -> f64 {
        self.rho_aa
    }

    pub fn rho_bb(&self) -> f64 {
        1.0 - self.rho_aa
    }

    pub fn rho_ab(&self) -> Complex64 {
        self.rho_ab
    }

    pub fn rho_ba(&self) -> Complex64 {
        self.rho_ab.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho_aa + self.rho_bb()
    }

    /// Full matrix, rows and columns ordered (a, b).
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[Complex64::new(self.rho_aa, 0.0), self.rho_ab], [self.rho_ba(), Complex64::new(self.rho_bb(), 0.0)]]
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector::new(2.0 * self.rho_ab.re, -2.0 * self.rho_ab.im, 2.0 * self.rho_aa - 1.0)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_gap = (0.25 * (self.rho_aa - self.rho_bb()).powi(2) + self.rho_ab.norm_sqr()).sqrt();
        (0.5 - half_gap, 0.5 + half_gap)
    }

    /// `(re_rho_aa, re_rho_ab, im_rho_ab)`.
    pub fn csv_row(&self) -> [f64; 3] {
        [self.rho_aa, self.rho_ab.re, self.rho_ab.im]
    }

    pub fn csv_header() -> [&'static str; 3] {
        ["re_rho_aa", "re_rho_ab", "im_rho_ab"]
    }
}

/// `Tr[rho^2]`.
pub fn purity(rho: &DensityMatrix2) -> f64 {
    rho.rho_aa * rho.rho_aa + rho.rho_bb() * rho.rho_bb() + 2.0 * rho.rho_ab.norm_sqr()
}

/// l1-norm of coherence, the sum of off-diagonal magnitudes.
pub fn l1_coherence(rho: &DensityMatrix2) -> f64 {
    2.0 * rho.rho_ab.norm()
}

/// The map `Omega(t, 0)` acting on `(<sigma_x>, <sigma_y>, <sigma_z>, <1>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliPropagator {
    matrix: [[Complex64; 4]; 4],
}

impl PauliPropagator {
    /// Builds the block matrix from an amplitude value.
    pub fn from_amplitude(a: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        let re = 0.5 * (a + a.conj());
        let im_block = -0.5 * i * (a - a.conj());
        let pop = Complex64::new(a.norm_sqr(), 0.0);
        Self {
            matrix: [
                [re, im_block, zero, zero],
                [-im_block, re, zero, zero],
                [zero, zero, pop, pop - one],
                [zero, zero, zero, one],
            ],
        }
    }

    pub fn identity() -> Self {
        Self::from_amplitude(Complex64::new(1.0, 0.0))
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    /// Applies the map to a Bloch vector; imaginary parts (zero by
    /// construction) are dropped.
    pub fn apply(&self, b: &BlochVector) -> BlochVector {
        let v = [b.x, b.y, b.z, 1.0];
        let row = |r: usize| -> f64 { self.matrix[r].iter().zip(v.iter()).map(|(m, x)| m * x).sum::<Complex64>().re };
        BlochVector::new(row(0), row(1), row(2))
    }

    pub fn apply_state(&self, rho: &DensityMatrix2) -> Result<DensityMatrix2> {
        DensityMatrix2::from_bloch(self.apply(&rho.bloch()))
    }
}

/// Reduced dynamics for one parameter set.
#[derive(Debug, Clone)]
pub struct QubitEvolution {
    params: PhysicalParams,
    amplitude: Amplitude,
}

/// Horizon (units of 1/gamma) for the numerical fallback used by [`QubitEvolution::new`].
pub const DEFAULT_FALLBACK_HORIZON: f64 = 200.0;

impl QubitEvolution {
    pub fn new(params: PhysicalParams) -> Result<Self> {
        Self::with_fallback_horizon(params, params.seconds(DEFAULT_FALLBACK_HORIZON))
    }

    /// As [`QubitEvolution::new`], solving numerically up to `horizon`
    /// seconds if the closed form is unavailable.
    pub fn with_fallback_horizon(params: PhysicalParams, horizon: f64) -> Result<Self> {
        Ok(Self { params, amplitude: Amplitude::resolve(&params, horizon)? })
    }

    pub fn from_parts(params: PhysicalParams, amplitude: Amplitude) -> Self {
        Self { params, amplitude }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn theta(&self) -> f64 {
        self.params.theta()
    }

    pub fn amplitude(&self) -> &Amplitude {
        &self.amplitude
    }

    pub fn amplitude_at(&self, t: f64) -> Complex64 {
        self.amplitude.at(t)
    }

    /// Same dynamics, different initial mixing angle.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Ok(Self { params: self.params.with_theta(theta)?, amplitude: self.amplitude.clone() })
    }

    /// `rho(t)` with `rho_aa = cos^2(theta/2)|A|^2` and `rho_ab = sin(theta) A / 2`.
    pub fn state(&self, t: f64) -> DensityMatrix2 {
        state_from_amplitude(self.params.theta(), self.amplitude.at(t))
    }

    pub fn propagator(&self, t: f64) -> PauliPropagator {
        PauliPropagator::from_amplitude(self.amplitude.at(t))
    }
}

/// Evolved state for mixing angle `theta` given the amplitude value.
pub fn state_from_amplitude(theta: f64, a: Complex64) -> DensityMatrix2 {
    let c = (0.5 * theta).cos();
    // positive for |A| <= 1; no eigenvalue check
    DensityMatrix2 { rho_aa: c * c * a.norm_sqr(), rho_ab: 0.5 * theta.sin() * a }
}

/// `rho(t)` for `params`; fails on degenerate roots.
pub fn evolved_state(t: f64, params: &PhysicalParams) -> Result<DensityMatrix2> {
    let a = crate::amplitude::amplitude_analytic(t, params)?;
    Ok(state_from_amplitude(params.theta(), a))
}

/// Closed-form purity `2 cos^4(theta/2) |A|^2 (|A|^2 - 1) + 1`.
pub fn purity_closed_form(theta: f64, a: Complex64) -> f64 {
    let c2 = (0.5 * theta).cos().powi(2);
    let p = a.norm_sqr();
    2.0 * c2 * c2 * p * (p - 1.0) + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn evo(beta: f64, theta: f64) -> QubitEvolution {
        QubitEvolution::new(PhysicalParams::reference(beta).unwrap().with_theta(theta).unwrap()).unwrap()
    }

    #[test]
    fn initial_state_is_pure() {
        for &theta in &[0.0, 0.4, PI / 2.0, 2.9] {
            let rho = evo(1e-10, theta).state(0.0);
            assert!((rho.rho_aa() - (0.5 * theta).cos().powi(2)).abs() < 1e-9);
            assert!((rho.rho_ab() - 0.5 * theta.sin()).norm() < 1e-9);
            assert!((purity(&rho) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let e = evo(0.0, PI);
        for i in 0..100 {
            let rho = e.state(e.params().seconds(i as f64));
            assert!(rho.rho_aa() < 1e-30);
            assert!(rho.rho_ab().norm() < 1e-15);
        }
    }

    #[test]
    fn excited_population_decays() {
        let e = evo(0.0, PI / 2.0);
        let rho = e.state(e.params().seconds(1000.0));
        assert!(rho.rho_aa() < 0.003);
    }

    #[test]
    fn rejects_unphysical() {
        assert!(DensityMatrix2::new(1.2, Complex64::new(0.0, 0.0)).is_err());
        assert!(DensityMatrix2::new(0.5, Complex64::new(0.6, 0.0)).is_err());
        assert!(DensityMatrix2::new(f64::NAN, Complex64::new(0.0, 0.0)).is_err());
        assert!(DensityMatrix2::new(0.5, Complex64::new(0.3, 0.4)).is_ok());
    }

    #[test]
    fn propagator_identity_at_zero() {
        let e = evo(0.5e-9, 1.0);
        let m = e.propagator(0.0);
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((m.matrix()[r][c] - expect).norm() < 1e-9);
            }
        }
        assert_eq!(m.matrix()[3], PauliPropagator::identity().matrix()[3]);
    }

    #[test]
    fn vanishing_amplitude_sends_to_ground() {
        let m = PauliPropagator::from_amplitude(Complex64::new(0.0, 0.0));
        for b in [BlochVector::new(1.0, 0.0, 0.0), BlochVector::new(0.2, -0.3, 0.9), BlochVector::new(0.0, 0.0, -1.0)] {
            assert_eq!(m.apply(&b), BlochVector::new(0.0, 0.0, -1.0));
        }
    }

    #[test]
    fn propagator_matches_direct_state() {
        for &beta in &[0.0, 0.1e-9, 1e-9] {
            let e = evo(beta, PI / 2.0).with_theta(1.1).unwrap();
            let rho0 = DensityMatrix2::pure(1.1);
            for i in 0..=200 {
                let t = e.params().seconds(i as f64 * 0.25);
                let via_map = e.propagator(t).apply_state(&rho0).unwrap();
                let direct = e.state(t);
                assert!((via_map.rho_aa() - direct.rho_aa()).abs() < 1e-12);
                assert!((via_map.rho_ab() - direct.rho_ab()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn purity_values() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(purity_closed_form(0.3, one), 1.0);
        assert_eq!(purity_closed_form(0.3, Complex64::new(0.0, 0.0)), 1.0);
        let half = Complex64::new(0.5f64.sqrt(), 0.0);
        assert!((purity_closed_form(PI / 2.0, half) - 0.875).abs() < 1e-15);
        let rho = state_from_amplitude(PI / 2.0, half);
        assert!((purity(&rho) - 0.875).abs() < 1e-15);
        assert!((purity(&DensityMatrix2::maximally_mixed()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coherence_values() {
        assert_eq!(l1_coherence(&evo(0.0, 0.0).state(1.0)), 0.0);
        assert!((l1_coherence(&evo(0.0, PI / 2.0).state(0.0)) - 1.0).abs() < 1e-9);
        let slow = evo(0.0, PI / 2.0);
        let fast = evo(0.1e-9, PI / 2.0);
        let t = slow.params().seconds(30.0);
        assert!(l1_coherence(&fast.state(t)) > l1_coherence(&slow.state(t)));
    }

    #[test]
    fn bloch_roundtrip_and_csv() {
        let rho = DensityMatrix2::new(0.3, Complex64::new(0.1, -0.2)).unwrap();
        let back = DensityMatrix2::from_bloch(rho.bloch()).unwrap();
        assert!((back.rho_aa() - 0.3).abs() < 1e-15);
        assert!((back.rho_ab() - rho.rho_ab()).norm() < 1e-15);
        assert_eq!(rho.csv_row(), [0.3, 0.1, -0.2]);
        assert_eq!(rho.trace(), 1.0);
    }
}
