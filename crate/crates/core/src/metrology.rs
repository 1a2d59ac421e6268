//! Entanglement entropy and phase-estimation figures of merit.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::qubit::{state_from_amplitude, DensityMatrix2, QubitEvolution, POSITIVITY_TOLERANCE};
use crate::table::Table;

/// Eigenvalue-pair sums below this are left out of the QFI sum.
pub const QFI_PAIR_CUTOFF: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian 2x2 matrix.
pub fn hermitian_eigen(m: &Mat2) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let values = [mean - half_gap, mean + half_gap];

    if b.norm() <= f64::EPSILON * (a.abs() + d.abs()).max(f64::MIN_POSITIVE) {
        let e0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e1 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        return if a <= d { (values, [e0, e1]) } else { (values, [e1, e0]) };
    }
    let vector = |mu: f64| {
        // two equivalent null vectors of (m - mu); keep the larger one
        let u = [b, Complex64::new(mu - a, 0.0)];
        let w = [Complex64::new(mu - d, 0.0), b.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if nu >= nw {
            [u[0] / nu, u[1] / nu]
        } else {
            [w[0] / nw, w[1] / nw]
        }
    };
    (values, [vector(values[0]), vector(values[1])])
}

/// Von Neumann entropy `-Tr[rho ln rho]` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> Result<f64> {
    let (values, _) = hermitian_eigen(&rho.matrix());
    let mut s = 0.0;
    for p in values {
        if p < -POSITIVITY_TOLERANCE {
            return Err(CoreError::Unphysical(format!("eigenvalue {p:e} below zero")));
        }
        let p = p.clamp(0.0, 1.0);
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s.clamp(0.0, LN_2))
}

/// Entropy of the reduced qubit state on `t_grid` (seconds): columns `gamma_t, S`.
pub fn entropy_trajectory(evolution: &QubitEvolution, t_grid: &[f64]) -> Result<Table> {
    let mut table = Table::new(["gamma_t", "S"]);
    let gamma = evolution.params().gamma();
    for &t in t_grid {
        table.push_row(vec![gamma * t, von_neumann_entropy(&evolution.state(t))?]);
    }
    Ok(table)
}

/// Phase `phi` imprinted by `|b><b| + e^{i phi}|a><a|` on the initial state
/// with mixing angle `theta`, read out at time `t` (seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseProbe {
    theta: f64,
    phi: f64,
    t: f64,
}

impl PhaseProbe {
    pub fn new(theta: f64, phi: f64, t: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(CoreError::InvalidParameter {
                name: "theta",
                reason: format!("must lie in [0, pi], got {theta}"),
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(CoreError::InvalidParameter {
                name: "phi",
                reason: format!("must lie in [0, 2 pi), got {phi}"),
            });
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CoreError::InvalidParameter { name: "t", reason: format!("must be >= 0, got {t}") });
        }
        Ok(Self { theta, phi, t })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn t(&self) -> f64 {
        self.t
    }
}

/// `rho_phi(t)`: the evolved state with the coherence rotated by `e^{i phi}`.
pub fn encode_phase(probe: &PhaseProbe, evolution: &QubitEvolution) -> DensityMatrix2 {
    let a = evolution.amplitude_at(probe.t) * Complex64::from_polar(1.0, probe.phi);
    state_from_amplitude(probe.theta, a)
}

/// Analytic `d rho_phi / d phi`: zero diagonal, `i rho_ab` above the diagonal.
pub fn phase_derivative(rho_phi: &DensityMatrix2) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let upper = Complex64::i() * rho_phi.rho_ab();
    [[zero, upper], [upper.conj(), zero]]
}

/// Spectral QFI `sum_{m,n} 2/(p_m + p_n) |<m| d rho |n>|^2`.
pub fn qfi_spectral(rho: &Mat2, d_rho: &Mat2) -> f64 {
    let (p, vecs) = hermitian_eigen(rho);
    let mut f = 0.0;
    for m in 0..2 {
        for n in 0..2 {
            let denom = p[m] + p[n];
            if denom < QFI_PAIR_CUTOFF {
                continue;
            }
            let mut elem = Complex64::new(0.0, 0.0);
            for (i, row) in d_rho.iter().enumerate() {
                for (j, &dij) in row.iter().enumerate() {
                    elem += vecs[m][i].conj() * dij * vecs[n][j];
                }
            }
            f += 2.0 * elem.norm_sqr() / denom;
        }
    }
    f
}

/// Quantum Fisher information of `rho_phi(t)` with respect to `phi`.
pub fn qfi_phase(probe: &PhaseProbe, evolution: &QubitEvolution) -> f64 {
    let rho = encode_phase(probe, evolution);
    qfi_spectral(&rho.matrix(), &phase_derivative(&rho))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseUncertainty {
    Finite(f64),
    /// Zero Fisher information: the state carries no phase information.
    Unbounded,
}

impl PhaseUncertainty {
    pub fn value(&self) -> f64 {
        match self {
            PhaseUncertainty::Finite(v) => *v,
            PhaseUncertainty::Unbounded => f64::INFINITY,
        }
    }
}

/// Quantum Cramer-Rao bound `1/sqrt(F)`.
pub fn cramer_rao_bound(fisher: f64) -> PhaseUncertainty {
    if fisher > 0.0 {
        PhaseUncertainty::Finite(1.0 / fisher.sqrt())
    } else {
        PhaseUncertainty::Unbounded
    }
}

/// Columns `gamma_t, F, delta_phi_min` for the probe angle `theta` and `phi = 0`.
pub fn qfi_table(evolution: &QubitEvolution, theta: f64, t_grid: &[f64]) -> Result<Table> {
    let mut table = Table::new(["gamma_t", "F", "delta_phi_min"]);
    let gamma = evolution.params().gamma();
    for &t in t_grid {
        let f = qfi_phase(&PhaseProbe::new(theta, 0.0, t)?, evolution);
        table.push_row(vec![gamma * t, f, cramer_rao_bound(f).value()]);
    }
    Ok(table)
}
