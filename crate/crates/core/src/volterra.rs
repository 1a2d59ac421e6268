//! Direct time stepping of `A'(t) + int_0^t K(t, t') A(t') dt' = 0`, `A(0) = 1`.
//!
//! The memory integral uses the trapezoidal rule on the uniform grid and the
//! outer step is a Heun predictor-corrector, giving second order overall. The
//! cost is O(N^2) kernel evaluations; no fast-convolution tricks are used.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::table::Table;

/// Largest accepted `rate * dt` for the step-size preconditions.
pub const MAX_RATE_STEP: f64 = 0.05;

/// A two-time complex memory kernel `K(t, t')`, `t >= t'`, times in seconds.
pub trait MemoryKernel {
    fn eval(&self, t: f64, t_prime: f64) -> Complex64;

    /// Fastest rate (1/s) the kernel varies at; the solver requires
    /// `max_rate * dt <= 0.05`.
    fn max_rate(&self) -> f64 {
        0.0
    }

    /// Whether `K(t, t')` depends on `t - t'` only, which lets the solver
    /// tabulate it once per lag.
    fn is_stationary(&self) -> bool {
        false
    }
}

impl<K: MemoryKernel + ?Sized> MemoryKernel for &K {
    fn eval(&self, t: f64, t_prime: f64) -> Complex64 {
        (**self).eval(t, t_prime)
    }
    fn max_rate(&self) -> f64 {
        (**self).max_rate()
    }
    fn is_stationary(&self) -> bool {
        (**self).is_stationary()
    }
}

/// Adapts a closure to [`MemoryKernel`].
pub struct FnKernel<F> {
    f: F,
    max_rate: f64,
}

impl<F: Fn(f64, f64) -> Complex64> FnKernel<F> {
    pub fn new(f: F, max_rate: f64) -> Self {
        Self { f, max_rate }
    }
}

impl<F: Fn(f64, f64) -> Complex64> MemoryKernel for FnKernel<F> {
    fn eval(&self, t: f64, t_prime: f64) -> Complex64 {
        (self.f)(t, t_prime)
    }
    fn max_rate(&self) -> f64 {
        self.max_rate
    }
}

/// Identically zero kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroKernel;

impl MemoryKernel for ZeroKernel {
    fn eval(&self, _: f64, _: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn is_stationary(&self) -> bool {
        true
    }
}

/// `A(t_n)` sampled on the uniform grid `t_n = n dt`, `n = 0..=floor(t_max/dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraGrid {
    t_max: f64,
    dt: f64,
    values: Vec<Complex64>,
}

impl VolterraGrid {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(n, &a)| (self.time(n), a))
    }

    /// Linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, t: f64) -> Option<Complex64> {
        if t.is_nan() || t < 0.0 {
            return None;
        }
        let last = self.values.len() - 1;
        let pos = t / self.dt;
        if pos > last as f64 + 1e-9 {
            return None;
        }
        let i = (pos.floor() as usize).min(last);
        if i == last {
            return Some(self.values[last]);
        }
        let frac = pos - i as f64;
        Some(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }

    /// Trajectory table with columns `gamma_t, re_A, im_A, abs_A`.
    pub fn to_table(&self, gamma: f64) -> Table {
        let mut table = Table::new(["gamma_t", "re_A", "im_A", "abs_A"]);
        for (t, a) in self.iter() {
            table.push_row(vec![gamma * t, a.re, a.im, a.norm()]);
        }
        table
    }
}

/// Checks `max_rate * dt <= 0.05`.
pub fn check_step(max_rate: f64, dt: f64) -> Result<()> {
    let product = max_rate * dt;
    if product > MAX_RATE_STEP {
        return Err(CoreError::StepTooLarge { rate: max_rate, dt, product, limit: MAX_RATE_STEP });
    }
    Ok(())
}

/// Solves the amplitude equation for `kernel` on `[0, t_max]` with step `dt`.
pub fn solve_volterra<K: MemoryKernel>(kernel: &K, t_max: f64, dt: f64) -> Result<VolterraGrid> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CoreError::InvalidParameter { name: "dt", reason: format!("must be finite and > 0, got {dt}") });
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "t_max",
            reason: format!("must be finite and >= 0, got {t_max}"),
        });
    }
    check_step(kernel.max_rate(), dt)?;

    // guard against t_max/dt landing a hair below an integer
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let time = |n: usize| n as f64 * dt;

    let lag_table: Option<Vec<Complex64>> =
        kernel.is_stationary().then(|| (0..=steps).map(|n| kernel.eval(time(n), 0.0)).collect());
    let k = |n: usize, j: usize| match &lag_table {
        Some(tab) => tab[n - j],
        None => kernel.eval(time(n), time(j)),
    };

    let mut values = Vec::with_capacity(steps + 1);
    values.push(Complex64::new(1.0, 0.0));
    // memory integral at the current step, trapezoidal weights
    let mut memory = Complex64::new(0.0, 0.0);

    for n in 0..steps {
        let next = n + 1;
        // interior part of the trapezoid at t_{n+1}: full weight on 1..n, half on 0
        let mut interior = 0.5 * k(next, 0) * values[0];
        for (j, &a) in values.iter().enumerate().skip(1) {
            interior += k(next, j) * a;
        }
        let diag = 0.5 * k(next, next);

        let predictor = values[n] - dt * memory;
        let memory_pred = dt * (interior + diag * predictor);
        let corrected = values[n] - 0.5 * dt * (memory + memory_pred);
        if !(corrected.re.is_finite() && corrected.im.is_finite()) {
            return Err(CoreError::NonFinite { step: next, t: time(next), value: format!("{corrected}") });
        }
        memory = dt * (interior + diag * corrected);
        values.push(corrected);
    }

    Ok(VolterraGrid { t_max, dt, values })
}

/// One row of [`convergence_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// Max deviation from the finest run on the coarse run's grid.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Observed order from successive-run differences (Cauchy estimate),
    /// `None` when the differences vanish.
    pub order: Option<f64>,
}

impl std::fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>14} {:>14}", "dt", "max deviation")?;
        for r in &self.rows {
            writeln!(f, "{:>14.6e} {:>14.6e}", r.dt, r.deviation)?;
        }
        match self.order {
            Some(p) => writeln!(f, "estimated order: {p:.3}"),
            None => writeln!(f, "estimated order: n/a (exact at every resolution)"),
        }
    }
}

/// Solves at each step in `dt_list` (descending, at least three entries,
/// each an integer multiple of the last) and compares against the finest run.
pub fn convergence_report<K: MemoryKernel>(kernel: &K, t_max: f64, dt_list: &[f64]) -> Result<ConvergenceReport> {
    if dt_list.len() < 3 {
        return Err(CoreError::InvalidParameter { name: "dt_list", reason: "need at least three step sizes".into() });
    }
    if dt_list.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Greater)) {
        return Err(CoreError::InvalidParameter { name: "dt_list", reason: "must be strictly descending".into() });
    }
    let finest_dt = *dt_list.last().unwrap();
    let strides: Vec<usize> = dt_list
        .iter()
        .map(|&dt| {
            let s = (dt / finest_dt).round();
            if (s * finest_dt - dt).abs() > 1e-9 * dt {
                Err(CoreError::InvalidParameter {
                    name: "dt_list",
                    reason: format!("{dt} is not an integer multiple of {finest_dt}"),
                })
            } else {
                Ok(s as usize)
            }
        })
        .collect::<Result<_>>()?;

    let runs: Vec<VolterraGrid> = dt_list.iter().map(|&dt| solve_volterra(kernel, t_max, dt)).collect::<Result<_>>()?;
    let finest = runs.last().unwrap();

    let rows = runs
        .iter()
        .zip(&strides)
        .map(|(run, &stride)| {
            let deviation = run
                .values
                .iter()
                .enumerate()
                .filter_map(|(n, a)| finest.values.get(n * stride).map(|f| (a - f).norm()))
                .fold(0.0, f64::max);
            ConvergenceRow { dt: run.dt, deviation }
        })
        .collect();

    // Cauchy differences between consecutive runs, sampled on the coarsest grid
    let coarse_stride = strides[0];
    let diffs: Vec<f64> = runs
        .windows(2)
        .zip(strides.windows(2))
        .map(|(pair, s)| {
            let (a, b) = (&pair[0], &pair[1]);
            let (sa, sb) = (coarse_stride / s[0], coarse_stride / s[1]);
            (0..)
                .map_while(|m| Some((a.values.get(m * sa)?, b.values.get(m * sb)?)))
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let order = if diffs.len() >= 2 {
        let (d1, d2) = (diffs[diffs.len() - 2], diffs[diffs.len() - 1]);
        let ratio = dt_list[dt_list.len() - 3] / dt_list[dt_list.len() - 2];
        (d1 > 0.0 && d2 > 0.0).then(|| (d1 / d2).ln() / ratio.ln())
    } else {
        None
    };
    Ok(ConvergenceReport { rows, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_kernel_keeps_amplitude() {
        let grid = solve_volterra(&ZeroKernel, 3.0, 0.1).unwrap();
        assert_eq!(grid.len(), 31);
        assert!(grid.values().iter().all(|&a| a == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn grid_length_and_initial_value() {
        let k = FnKernel::new(|t, s| Complex64::new((s - t).exp(), 0.0), 1.0);
        let grid = solve_volterra(&k, 1.0, 0.03).unwrap();
        assert_eq!(grid.len(), (1.0f64 / 0.03).floor() as usize + 1);
        assert_eq!(grid.values()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_coarse_step() {
        let k = FnKernel::new(|_, _| Complex64::new(1.0, 0.0), 10.0);
        assert!(matches!(solve_volterra(&k, 1.0, 0.01), Err(CoreError::StepTooLarge { .. })));
        assert!(solve_volterra(&k, 1.0, 0.005).is_ok());
    }

    #[test]
    fn reports_overflow_step() {
        let k = FnKernel::new(|_, _| Complex64::new(-1e300, 0.0), 0.0);
        match solve_volterra(&k, 1.0, 0.1) {
            Err(CoreError::NonFinite { step, .. }) => assert!(step >= 1),
            other => panic!("expected overflow diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn constant_kernel_is_cosine() {
        // K = w^2 gives A'' = -w^2 A, A(0) = 1, A'(0) = 0
        let w = 2.0;
        let k = FnKernel::new(move |_, _| Complex64::new(w * w, 0.0), 0.0);
        let grid = solve_volterra(&k, 3.0, 1e-3).unwrap();
        for (t, a) in grid.iter() {
            assert!((a - (w * t).cos()).norm() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn interpolation() {
        let k = FnKernel::new(|_, _| Complex64::new(1.0, 0.0), 0.0);
        let grid = solve_volterra(&k, 1.0, 0.25).unwrap();
        let mid = grid.interpolate(0.375).unwrap();
        assert!((mid - 0.5 * (grid.values()[1] + grid.values()[2])).norm() < 1e-15);
        assert!(grid.interpolate(1.5).is_none());
        assert!(grid.interpolate(-0.1).is_none());
        assert_eq!(grid.interpolate(1.0).unwrap(), grid.values()[4]);
    }

    #[test]
    fn report_for_zero_kernel() {
        let r = convergence_report(&ZeroKernel, 1.0, &[0.1, 0.05, 0.025]).unwrap();
        assert!(r.rows.iter().all(|row| row.deviation == 0.0));
        assert!(r.order.is_none());
        assert!(convergence_report(&ZeroKernel, 1.0, &[0.1, 0.05]).is_err());
        assert!(convergence_report(&ZeroKernel, 1.0, &[0.05, 0.1, 0.01]).is_err());
        assert!(convergence_report(&ZeroKernel, 1.0, &[0.1, 0.07, 0.03]).is_err());
    }
}
