//! Monic complex cubics: Cardano's formulas with Newton polishing.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::params::PhysicalParams;

/// `x^3 + a2 x^2 + a1 x + a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonicCubic {
    pub a2: Complex64,
    pub a1: Complex64,
    pub a0: Complex64,
}

const NEWTON_STEPS: usize = 2;

impl MonicCubic {
    pub fn new(a2: Complex64, a1: Complex64, a0: Complex64) -> Self {
        Self { a2, a1, a0 }
    }

    /// Characteristic cubic of the amplitude's Laplace transform, in units of gamma:
    /// `x^3 + 2 (y1 - i y3) x^2 + (u+ u- + y1/4) x + y1 (y1 - i y3) / 4`.
    pub fn characteristic(params: &PhysicalParams) -> Self {
        let y1 = params.y1();
        let w = Complex64::new(y1, -params.y3());
        Self { a2: 2.0 * w, a1: params.u_plus() * params.u_minus() + y1 / 4.0, a0: y1 * w / 4.0 }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.a2) * x + self.a1) * x + self.a0
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        (3.0 * x + 2.0 * self.a2) * x + self.a1
    }

    /// Largest coefficient magnitude, counting the leading 1.
    pub fn coefficient_scale(&self) -> f64 {
        1.0f64.max(self.a2.norm()).max(self.a1.norm()).max(self.a0.norm())
    }

    /// `|p(x)|` relative to the largest coefficient magnitude.
    pub fn relative_residual(&self, x: Complex64) -> f64 {
        self.eval(x).norm() / self.coefficient_scale()
    }

    /// The three roots, sorted by descending real part and then descending
    /// imaginary part.
    pub fn roots(&self) -> [Complex64; 3] {
        let mut roots = self.cardano();
        for r in roots.iter_mut() {
            *r = self.polish(*r);
        }
        sort_roots(&mut roots);
        roots
    }

    fn cardano(&self) -> [Complex64; 3] {
        let shift = self.a2 / 3.0;
        // depressed cubic t^3 + p t + q with x = t - a2/3
        let p = self.a1 - self.a2 * shift;
        let q = 2.0 * shift * shift * shift - shift * self.a1 + self.a0;

        let half_q = q / 2.0;
        let disc = (half_q * half_q + (p / 3.0).powu(3)).sqrt();
        // pick the branch that avoids cancellation
        let w1 = -half_q + disc;
        let w2 = -half_q - disc;
        let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
        if w.norm() == 0.0 {
            return [-shift; 3];
        }
        let c = w.powf(1.0 / 3.0);
        let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut rot = Complex64::new(1.0, 0.0);
        for slot in out.iter_mut() {
            let ck = rot * c;
            *slot = ck - p / (3.0 * ck) - shift;
            rot *= omega;
        }
        out
    }

    fn polish(&self, mut x: Complex64) -> Complex64 {
        for _ in 0..NEWTON_STEPS {
            let d = self.derivative(x);
            if d.norm() == 0.0 {
                break;
            }
            let next = x - self.eval(x) / d;
            if !(next.re.is_finite() && next.im.is_finite()) {
                break;
            }
            // keep the better of the two iterates
            if self.eval(next).norm() <= self.eval(x).norm() {
                x = next;
            } else {
                break;
            }
        }
        x
    }
}

/// Orders roots by descending real part; real parts closer than a relative
/// 1e-12 count as ties and are ordered by descending imaginary part.
pub fn sort_roots(roots: &mut [Complex64; 3]) {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    roots.sort_by(|a, b| {
        if (a.re - b.re).abs() <= 1e-12 * scale {
            b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
        } else {
            b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal)
        }
    });
}

/// Roots of the characteristic cubic for `params`.
pub fn cubic_roots(params: &PhysicalParams) -> [Complex64; 3] {
    MonicCubic::characteristic(params).roots()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(r: [Complex64; 3]) -> MonicCubic {
        MonicCubic::new(-(r[0] + r[1] + r[2]), r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -(r[0] * r[1] * r[2]))
    }

    #[test]
    fn recovers_known_roots() {
        let expect = [c(1.0, 2.0), c(-0.5, 0.0), c(-3.0, -1.0)];
        let roots = from_roots(expect).roots();
        for (r, e) in roots.iter().zip(expect.iter()) {
            assert!((r - e).norm() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn triple_root() {
        let roots = from_roots([c(0.3, -0.1); 3]).roots();
        for r in roots {
            assert!((r - c(0.3, -0.1)).norm() < 1e-5);
        }
    }

    #[test]
    fn ordering_breaks_ties_by_imaginary_part() {
        let mut r = [c(-1.0, -2.0), c(-1.0, 2.0), c(0.5, 0.0)];
        sort_roots(&mut r);
        assert_eq!(r, [c(0.5, 0.0), c(-1.0, 2.0), c(-1.0, -2.0)]);
    }

    #[test]
    fn static_qubit_root_is_minus_width() {
        let p = PhysicalParams::new(1.0, 0.3, 0.7, 5.0, 0.0, 1.0).unwrap();
        let target = c(-p.y1(), p.y3());
        let roots = cubic_roots(&p);
        assert!(roots.iter().any(|r| (r - target).norm() < 1e-10));
    }

    #[test]
    fn reference_roots_are_polished() {
        for &beta in &[0.0, 0.01e-9, 0.05e-9, 0.1e-9, 0.5e-9, 0.7e-9, 1e-9] {
            let p = PhysicalParams::reference(beta).unwrap();
            let cubic = MonicCubic::characteristic(&p);
            let roots = cubic.roots();
            for r in roots {
                assert!(cubic.relative_residual(r) <= 1e-10, "beta {beta}: residual {}", cubic.relative_residual(r));
            }
            let rebuilt = from_roots(roots);
            assert!((rebuilt.a2 - cubic.a2).norm() <= 1e-9);
            assert!((rebuilt.a1 - cubic.a1).norm() <= 1e-9);
            assert!((rebuilt.a0 - cubic.a0).norm() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn residuals_small_for_random_roots(
            re in proptest::array::uniform3(-10.0f64..10.0),
            im in proptest::array::uniform3(-10.0f64..10.0),
        ) {
            let r = [c(re[0], im[0]), c(re[1], im[1]), c(re[2], im[2])];
            let cubic = from_roots(r);
            for x in cubic.roots() {
                prop_assert!(cubic.relative_residual(x) <= 1e-10);
            }
        }
    }
}
