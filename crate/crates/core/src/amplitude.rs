//! Closed-form excited-state amplitude as a sum of three exponentials, with a
//! numerical fallback when the characteristic roots coincide.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::cubic::cubic_roots;
use crate::error::{CoreError, Result};
use crate::kernel::ClosedKernel;
use crate::params::PhysicalParams;
use crate::volterra::{solve_volterra, MemoryKernel, VolterraGrid};

/// Relative separation below which two roots are treated as coincident.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Roots `x_i` (units of gamma) of the characteristic cubic and the
/// partial-fraction weights `c_i` of `A(t) = sum_i c_i exp(x_i gamma t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSolution {
    gamma: f64,
    roots: [Complex64; 3],
    residues: [Complex64; 3],
}

impl AmplitudeSolution {
    pub fn new(params: &PhysicalParams) -> Result<Self> {
        let roots = cubic_roots(params);
        let separation = min_relative_separation(&roots);
        if separation < DEGENERACY_TOLERANCE {
            return Err(CoreError::DegenerateRoots { separation });
        }
        let (up, um) = (params.u_plus(), params.u_minus());
        let mut residues = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            let x = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &other) in roots.iter().enumerate() {
                if j != i {
                    denom *= x - other;
                }
            }
            residues[i] = (x + up) * (x + um) / denom;
        }
        Ok(Self { gamma: params.gamma(), roots, residues })
    }

    pub fn roots(&self) -> &[Complex64; 3] {
        &self.roots
    }

    pub fn residues(&self) -> &[Complex64; 3] {
        &self.residues
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `A(t)` for `t` in seconds.
    pub fn at(&self, t: f64) -> Complex64 {
        let gt = self.gamma * t;
        if gt == 0.0 {
            // initial condition, exact
            return Complex64::new(1.0, 0.0);
        }
        self.roots.iter().zip(self.residues.iter()).map(|(x, c)| c * (x * gt).exp()).sum()
    }

    /// Plain-text record with 17 significant digits per component.
    pub fn to_record(&self) -> String {
        let mut s = String::from("# amplitude solution: roots in units of gamma, residues dimensionless\n");
        writeln!(s, "gamma {:.16e}", self.gamma).unwrap();
        for (i, r) in self.roots.iter().enumerate() {
            writeln!(s, "root {i} {:.16e} {:.16e}", r.re, r.im).unwrap();
        }
        for (i, c) in self.residues.iter().enumerate() {
            writeln!(s, "residue {i} {:.16e} {:.16e}", c.re, c.im).unwrap();
        }
        s
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut gamma = None;
        let mut roots = [None; 3];
        let mut residues = [None; 3];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| CoreError::Record(format!("{line:?}: {e}")));
            match fields.as_slice() {
                ["gamma", v] => gamma = Some(num(v)?),
                [kind @ ("root" | "residue"), idx, re, im] => {
                    let i: usize = idx.parse().map_err(|_| CoreError::Record(format!("bad index in {line:?}")))?;
                    if i > 2 {
                        return Err(CoreError::Record(format!("index out of range in {line:?}")));
                    }
                    let z = Complex64::new(num(re)?, num(im)?);
                    if *kind == "root" {
                        roots[i] = Some(z);
                    } else {
                        residues[i] = Some(z);
                    }
                }
                _ => return Err(CoreError::Record(format!("unrecognised line {line:?}"))),
            }
        }
        let missing = |what: &str| CoreError::Record(format!("missing {what}"));
        let take = |a: [Option<Complex64>; 3], what: &str| -> Result<[Complex64; 3]> {
            Ok([
                a[0].ok_or_else(|| missing(what))?,
                a[1].ok_or_else(|| missing(what))?,
                a[2].ok_or_else(|| missing(what))?,
            ])
        };
        Ok(Self {
            gamma: gamma.ok_or_else(|| missing("gamma"))?,
            roots: take(roots, "root")?,
            residues: take(residues, "residue")?,
        })
    }
}

fn min_relative_separation(roots: &[Complex64; 3]) -> f64 {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let d01 = (roots[0] - roots[1]).norm();
    let d02 = (roots[0] - roots[2]).norm();
    let d12 = (roots[1] - roots[2]).norm();
    d01.min(d02).min(d12) / scale
}

/// Closed-form `A(t)`; fails on degenerate roots.
pub fn amplitude_analytic(t: f64, params: &PhysicalParams) -> Result<Complex64> {
    if t.is_nan() || t < 0.0 {
        return Err(CoreError::InvalidParameter { name: "t", reason: format!("must be >= 0, got {t}") });
    }
    Ok(AmplitudeSolution::new(params)?.at(t))
}

/// The excited-state amplitude for one parameter set: closed form when the
/// roots are simple, otherwise a Volterra solution on a fixed horizon.
#[derive(Debug, Clone)]
pub enum Amplitude {
    Analytic(AmplitudeSolution),
    /// Numerical fallback; evaluation beyond `grid.t_max()` panics.
    Numerical(Arc<VolterraGrid>),
}

impl Amplitude {
    /// Closed form, or a numerical solution up to `fallback_horizon` seconds
    /// when the roots are degenerate.
    pub fn resolve(params: &PhysicalParams, fallback_horizon: f64) -> Result<Self> {
        match AmplitudeSolution::new(params) {
            Ok(sol) => Ok(Amplitude::Analytic(sol)),
            Err(CoreError::DegenerateRoots { .. }) => {
                let kernel = ClosedKernel::new(*params);
                let dt = fallback_step(params, &kernel);
                let grid = solve_volterra(&kernel, fallback_horizon, dt)?;
                Ok(Amplitude::Numerical(Arc::new(grid)))
            }
            Err(e) => Err(e),
        }
    }

    pub fn is_fallback(&self) -> bool {
        matches!(self, Amplitude::Numerical(_))
    }

    pub fn solution(&self) -> Option<&AmplitudeSolution> {
        match self {
            Amplitude::Analytic(s) => Some(s),
            Amplitude::Numerical(_) => None,
        }
    }

    /// `A(t)` for `t` in seconds.
    pub fn at(&self, t: f64) -> Complex64 {
        match self {
            Amplitude::Analytic(s) => s.at(t),
            Amplitude::Numerical(grid) => grid
                .interpolate(t)
                .unwrap_or_else(|| panic!("t = {t} s is outside the fallback horizon {} s", grid.t_max())),
        }
    }
}

fn fallback_step(params: &PhysicalParams, kernel: &ClosedKernel) -> f64 {
    let by_rate = 0.02 / kernel.max_rate();
    by_rate.min(0.01 / params.gamma())
}
