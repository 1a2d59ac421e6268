use std::f64::consts::PI;

use movq::metrology::{encode_phase, qfi_phase, qfi_spectral, von_neumann_entropy, PhaseProbe};
use movq::qubit::{purity_closed_form, state_from_amplitude};
use movq::{l1_coherence, purity, BlochVector, Complex64, DensityMatrix2, PhysicalParams, QubitEvolution};
use nalgebra::Matrix2;
use proptest::prelude::*;

fn nalgebra_entropy(rho: &DensityMatrix2) -> f64 {
    let m = rho.matrix();
    let h = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    h.symmetric_eigenvalues().iter().map(|&p| if p > 1e-15 { -p * p.ln() } else { 0.0 }).sum()
}

fn bloch_entropy(r: f64) -> f64 {
    let f = |p: f64| if p > 1e-15 { -p * p.ln() } else { 0.0 };
    f(0.5 * (1.0 + r)) + f(0.5 * (1.0 - r))
}

fn bloch_ball() -> impl Strategy<Value = BlochVector> {
    (0.0..=1.0f64, 0.0..PI, 0.0..2.0 * PI)
        .prop_map(|(r, pol, az)| BlochVector::new(r * pol.sin() * az.cos(), r * pol.sin() * az.sin(), r * pol.cos()))
}

fn unit_disc() -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, -PI..PI).prop_map(|(r, arg)| Complex64::from_polar(r, arg))
}

proptest! {
    #[test]
    fn entropy_agrees_with_independent_diagonalisation(b in bloch_ball()) {
        let rho = DensityMatrix2::from_bloch(b).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((s - nalgebra_entropy(&rho)).abs() < 1e-10);
        prop_assert!((s - bloch_entropy(b.norm())).abs() < 1e-10);
        prop_assert!((-1e-12..=2f64.ln() + 1e-12).contains(&s));
    }

    #[test]
    fn purity_is_bloch_length(b in bloch_ball()) {
        let rho = DensityMatrix2::from_bloch(b).unwrap();
        prop_assert!((purity(&rho) - 0.5 * (1.0 + b.norm().powi(2))).abs() < 1e-12);
        prop_assert!((l1_coherence(&rho) - b.x.hypot(b.y)).abs() < 1e-12);
    }

    #[test]
    fn damped_states_are_physical(theta in 0.0..PI, a in unit_disc()) {
        let rho = state_from_amplitude(theta, a);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-14);
        prop_assert!(rho.eigenvalues().0 >= -1e-12);
        prop_assert!((purity(&rho) - purity_closed_form(theta, a)).abs() < 1e-12);
        prop_assert!(rho.bloch().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn qfi_matches_closed_form_and_finite_difference(theta in 0.05..PI - 0.05, a in unit_disc(), phi in -PI..PI) {
        prop_assume!(a.norm() > 1e-3);
        let rho = state_from_amplitude(theta, a * Complex64::from_polar(1.0, phi));
        let zero = Complex64::new(0.0, 0.0);
        let up = Complex64::i() * rho.rho_ab();
        let f = qfi_spectral(&rho.matrix(), &[[zero, up], [up.conj(), zero]]);
        let closed = theta.sin().powi(2) * a.norm_sqr();
        prop_assert!((f - closed).abs() < 1e-9 * closed.max(1e-3));

        let eps = 1e-6;
        let plus = state_from_amplitude(theta, a * Complex64::from_polar(1.0, phi + eps)).matrix();
        let minus = state_from_amplitude(theta, a * Complex64::from_polar(1.0, phi - eps)).matrix();
        let mut fd = [[zero; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                fd[i][j] = (plus[i][j] - minus[i][j]) / (2.0 * eps);
            }
        }
        let f_fd = qfi_spectral(&rho.matrix(), &fd);
        prop_assert!((f - f_fd).abs() <= 1e-6 * f.max(1e-6), "{} vs {}", f, f_fd);
    }
}

#[test]
fn qfi_is_independent_of_encoded_phase() {
    let evo = QubitEvolution::new(PhysicalParams::reference(0.05e-9).unwrap()).unwrap();
    for k in 0..6 {
        let t = evo.params().seconds(4.0 * k as f64);
        let base = qfi_phase(&PhaseProbe::new(PI / 2.0, 0.0, t).unwrap(), &evo);
        for phi in [0.3, 0.7, 1.9, 3.0, 6.2] {
            let probe = PhaseProbe::new(PI / 2.0, phi, t).unwrap();
            assert!((qfi_phase(&probe, &evo) - base).abs() < 1e-12);
            assert!((encode_phase(&probe, &evo).trace() - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn evolved_states_stay_physical_on_a_grid() {
    for beta in [0.0, 0.01e-9, 0.1e-9, 1e-9] {
        let base = PhysicalParams::reference(beta).unwrap();
        for theta in [0.0, 0.4, PI / 2.0, 2.5, PI] {
            let evo = QubitEvolution::new(base.with_theta(theta).unwrap()).unwrap();
            for k in 0..=200 {
                let rho = evo.state(evo.params().seconds(2.5 * k as f64));
                assert!((rho.trace() - 1.0).abs() < 1e-12);
                assert!(rho.eigenvalues().0 >= -1e-12);
                assert!(purity(&rho) <= 1.0 + 1e-12);
            }
        }
    }
}
