//! Lorentzian reservoir, the two-time memory kernel and its quadrature form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::params::PhysicalParams;
use crate::volterra::MemoryKernel;

/// Lorentzian spectral density of the cavity modes, in Hz.
pub fn spectral_density(omega: f64, params: &PhysicalParams) -> f64 {
    let detuning = params.omega0() - omega - params.delta();
    let lambda = params.lambda();
    params.gamma() * lambda * lambda / (2.0 * PI * (detuning * detuning + lambda * lambda))
}

/// Continuum-limit memory kernel `(gamma lambda / 4) cosh[theta_bar s] exp[-lambda_bar s]`
/// with `s = t - t'`.
pub fn kernel_closed(t: f64, t_prime: f64, params: &PhysicalParams) -> Result<Complex64> {
    if t < t_prime {
        return Err(CoreError::TimeOrder { t, t_prime });
    }
    Ok(kernel_at_lag(t - t_prime, params))
}

pub(crate) fn kernel_at_lag(lag: f64, params: &PhysicalParams) -> Complex64 {
    let prefactor = 0.25 * params.gamma() * params.lambda();
    let theta_bar = params.theta_bar() * lag;
    let lambda_bar = params.lambda_bar() * lag;
    // cosh(a) e^{-b} = (e^{a-b} + e^{-a-b}) / 2, which stays finite when |a| is large
    prefactor * 0.5 * ((theta_bar - lambda_bar).exp() + (-theta_bar - lambda_bar).exp())
}

/// The closed-form kernel packaged for the Volterra solver.
#[derive(Debug, Clone, Copy)]
pub struct ClosedKernel {
    params: PhysicalParams,
}

impl ClosedKernel {
    pub fn new(params: PhysicalParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }
}

impl MemoryKernel for ClosedKernel {
    fn eval(&self, t: f64, t_prime: f64) -> Complex64 {
        kernel_at_lag(t - t_prime, &self.params)
    }

    fn max_rate(&self) -> f64 {
        let p = &self.params;
        p.lambda().max(p.beta() * p.omega0())
    }

    fn is_stationary(&self) -> bool {
        true
    }
}

/// Frequency-quadrature settings for [`kernel_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Upper frequency limit, Hz. The window is mirrored about the cavity
    /// centre frequency and clamped at zero.
    pub cutoff: f64,
    /// Composite-Simpson node count (rounded up to odd).
    pub n_points: usize,
    /// Allowed change on doubling the node count, relative to `gamma lambda / 4`.
    pub rel_tol: f64,
}

impl Quadrature {
    pub const DEFAULT_WIDTHS: f64 = 200.0;
    pub const DEFAULT_POINTS: usize = 20001;

    /// `omega0 + 200 lambda`, 20001 nodes, 1e-8 convergence tolerance.
    pub fn for_params(params: &PhysicalParams) -> Self {
        Self {
            cutoff: params.omega0() + Self::DEFAULT_WIDTHS * params.lambda(),
            n_points: Self::DEFAULT_POINTS,
            rel_tol: 1e-8,
        }
    }
}

/// Memory kernel obtained by integrating the Lorentzian spectral density
/// against the motional shape functions.
///
/// The product of the two shape functions is expanded into cosines; the term
/// that oscillates with the cavity transit time averages out in the infinite
/// cavity limit and is dropped, leaving
/// `(1/2) int J(w) cos[w beta (t - t')] exp[-i (w - omega0)(t - t')] dw`.
pub fn kernel_integral(t: f64, t_prime: f64, params: &PhysicalParams, quad: &Quadrature) -> Result<Complex64> {
    if t < t_prime {
        return Err(CoreError::TimeOrder { t, t_prime });
    }
    if quad.cutoff.is_nan() || quad.cutoff <= params.omega0() {
        return Err(CoreError::InvalidParameter {
            name: "cutoff",
            reason: format!("must exceed omega0 = {}, got {}", params.omega0(), quad.cutoff),
        });
    }
    if quad.n_points < 1000 {
        return Err(CoreError::InvalidParameter {
            name: "n_points",
            reason: format!("at least 1000 nodes required, got {}", quad.n_points),
        });
    }
    let centre = params.cavity_frequency();
    let half_width = quad.cutoff - centre;
    let lo = (centre - half_width).max(0.0);
    let hi = quad.cutoff;
    let lag = t - t_prime;

    // integrate in the offset from the cavity centre; absolute frequencies
    // near 1e11 Hz would cost ~1e-5 Hz of node placement accuracy
    let (lo, hi) = (lo - centre, hi - centre);
    let n = quad.n_points | 1;
    let coarse = simpson(lo, hi, n, |s| kernel_integrand(s, lag, params));
    let fine = simpson(lo, hi, 2 * n - 1, |s| kernel_integrand(s, lag, params));

    let scale = 0.25 * params.gamma() * params.lambda();
    let change = (fine - coarse).norm() / scale;
    if change > quad.rel_tol {
        return Err(CoreError::QuadratureNotConverged { change, tolerance: quad.rel_tol });
    }
    Ok(fine)
}

/// Integrand at frequency `omega_c + offset`.
fn kernel_integrand(offset: f64, lag: f64, params: &PhysicalParams) -> Complex64 {
    let lambda = params.lambda();
    let density = params.gamma() * lambda * lambda / (2.0 * PI * (offset * offset + lambda * lambda));
    let motional = ((params.cavity_frequency() + offset) * params.beta() * lag).cos();
    let phase = -(offset - params.delta()) * lag;
    0.5 * density * motional * Complex64::from_polar(1.0, phase)
}

/// Composite Simpson rule on `n` (odd) equally spaced nodes.
fn simpson<F: Fn(f64) -> Complex64>(lo: f64, hi: f64, n: usize, f: F) -> Complex64 {
    debug_assert!(n >= 3 && n % 2 == 1);
    let h = (hi - lo) / (n - 1) as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + h * i as f64);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64) -> PhysicalParams {
        PhysicalParams::reference(beta).unwrap()
    }

    #[test]
    fn spectral_density_peak_and_half_width() {
        let p = PhysicalParams::new(33.3, 0.333, 3.0, 1e3, 0.0, 1.0).unwrap();
        let peak = p.omega0() - p.delta();
        let g = p.gamma();
        assert!((spectral_density(peak, &p) - g / (2.0 * PI)).abs() < 1e-15 * g);
        let hw_hi = spectral_density(peak + p.lambda(), &p);
        let hw_lo = spectral_density(peak - p.lambda(), &p);
        assert!((hw_hi - g / (4.0 * PI)).abs() < 1e-12 * g);
        assert!((hw_lo - g / (4.0 * PI)).abs() < 1e-12 * g);
        let a = spectral_density(peak + 3.0 * p.lambda(), &p);
        let b = spectral_density(peak - 3.0 * p.lambda(), &p);
        assert!((a - b).abs() < 1e-12 * a);
        assert!(spectral_density(0.0, &p) > 0.0);
    }

    #[test]
    fn closed_kernel_at_equal_times() {
        let p = params(1e-9);
        let k = kernel_closed(0.7, 0.7, &p).unwrap();
        assert_eq!(k, Complex64::new(0.25 * p.gamma() * p.lambda(), 0.0));
    }

    #[test]
    fn closed_kernel_static_one_width() {
        let p = params(0.0);
        let lag = 1.0 / p.lambda();
        let k = kernel_closed(2.0 + lag, 2.0, &p).unwrap();
        let expected = 0.25 * p.gamma() * p.lambda() * (-1.0f64).exp();
        assert!((k - expected).norm() < 1e-14 * expected);
    }

    #[test]
    fn closed_kernel_rejects_reversed_times() {
        let p = params(0.0);
        assert!(matches!(kernel_closed(0.1, 0.2, &p), Err(CoreError::TimeOrder { .. })));
    }

    #[test]
    fn closed_kernel_is_stationary_when_static() {
        let p = params(0.0).with_delta(0.2).unwrap();
        for &lag in &[0.0, 0.05, 0.3, 1.1] {
            let a = kernel_closed(lag, 0.0, &p).unwrap();
            for &shift in &[0.1, 0.77, 1.3] {
                let b = kernel_closed(shift + lag, shift, &p).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn integral_kernel_validates_inputs() {
        let p = params(0.0);
        let mut q = Quadrature::for_params(&p);
        assert!(kernel_integral(0.0, 0.1, &p, &q).is_err());
        q.n_points = 10;
        assert!(kernel_integral(0.1, 0.0, &p, &q).is_err());
        q.n_points = 2001;
        q.cutoff = p.omega0() * 0.5;
        assert!(kernel_integral(0.1, 0.0, &p, &q).is_err());
    }

    #[test]
    fn integral_kernel_reports_non_convergence() {
        // a window of 200 widths sampled by ~1000 nodes cannot resolve a
        // lag of a thousand correlation times
        let p = params(0.0);
        let q = Quadrature { n_points: 1001, ..Quadrature::for_params(&p) };
        let lag = 1000.0 / p.lambda();
        assert!(matches!(kernel_integral(lag, 0.0, &p, &q), Err(CoreError::QuadratureNotConverged { .. })));
    }

    #[test]
    fn integral_kernel_equal_times_real_part() {
        let p = params(0.0);
        let k = kernel_integral(0.3, 0.3, &p, &Quadrature::for_params(&p)).unwrap();
        let scale = 0.25 * p.gamma() * p.lambda();
        assert!((k.re - scale).abs() < 4e-3 * scale);
        assert!(k.im.abs() < 1e-6 * scale);
    }
}
