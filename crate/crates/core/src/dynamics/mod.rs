//! Numerical dynamics of `f(z) = z^2 + c`.

pub mod cache;
pub mod equipotential;
pub mod precision;
pub mod ray;
pub mod rotation;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use equipotential::{equipotential, Equipotential};
pub use precision::Precision;
pub use ray::{trace_ray, RayStatus, RayTrace, Tracer, TraceParams};
pub use rotation::{detect_rotation_number, RotationDetection};

/// Iteration budget of a single Green's function evaluation.
pub const GREEN_BUDGET: usize = 10_000;

/// `z^2 + c` together with its fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticMap {
    pub c: Complex64,
    /// The dividing fixed point.
    pub alpha: Complex64,
    /// The non-dividing fixed point, landing point of the 0-ray.
    pub beta: Complex64,
    pub escape_radius: f64,
}

impl QuadraticMap {
    pub fn new(c: Complex64) -> Self {
        let beta = (Complex64::new(1.0, 0.0) + (Complex64::new(1.0, 0.0) - 4.0 * c).sqrt()) * 0.5;
        QuadraticMap {
            c,
            alpha: Complex64::new(1.0, 0.0) - beta,
            beta,
            escape_radius: 2.0 + c.norm(),
        }
    }

    pub fn real(c: f64) -> Self {
        QuadraticMap::new(Complex64::new(c, 0.0))
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        z * z + self.c
    }

    /// Multiplier `f'(alpha) = 2 alpha`.
    pub fn alpha_multiplier(&self) -> Complex64 {
        2.0 * self.alpha
    }

    pub fn alpha_is_repelling(&self) -> bool {
        self.alpha_multiplier().norm() > 1.0 + 1e-9
    }

    pub fn is_real(&self) -> bool {
        self.c.im == 0.0
    }

    /// `f^n(z)` and its derivative in `z`.
    pub fn iterate_with_derivative(&self, z: Complex64, n: usize) -> (Complex64, Complex64) {
        let mut z = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            d = 2.0 * z * d;
            z = z * z + self.c;
        }
        (z, d)
    }

    pub fn iterate(&self, z: Complex64, n: usize) -> Complex64 {
        (0..n).fold(z, |z, _| z * z + self.c)
    }

    pub fn green(&self, z: Complex64) -> f64 {
        green(self, z).value
    }

    /// Solves `f^{m+p}(z) = f^m(z)` by Newton's method from `z0`: a point
    /// that lands after `m` steps on a cycle of period dividing `p`.
    pub fn refine_preperiodic(&self, z0: Complex64, m: usize, p: usize) -> Option<Complex64> {
        let mut z = z0;
        let mut step_norm = f64::INFINITY;
        for _ in 0..100 {
            let (zm, dm) = self.iterate_with_derivative(z, m);
            let (zp, dp) = self.iterate_with_derivative(zm, p);
            let g = zp - zm;
            let dg = dp * dm - dm;
            if dg.norm() == 0.0 || !g.is_finite() {
                return None;
            }
            let step = g / dg;
            z -= step;
            step_norm = step.norm();
            if step_norm <= 1e-15 * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        // Near the critical point the derivative is small and rounding
        // keeps the steps from shrinking further.
        (step_norm <= 1e-11 * (1.0 + z.norm())).then_some(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    /// The orbit did not escape within the budget; `value` is 0.
    pub below_resolution: bool,
    pub iterations: usize,
}

/// `lim 2^{-n} log+ |f^n(z)|`.
pub fn green(map: &QuadraticMap, z: Complex64) -> GreenValue {
    const BAILOUT: f64 = 1e20;
    let mut z = z;
    let mut scale = 1.0f64;
    for n in 0..GREEN_BUDGET {
        let r = z.norm();
        if r > BAILOUT {
            return GreenValue {
                value: r.ln() * scale,
                below_resolution: false,
                iterations: n,
            };
        }
        z = z * z + map.c;
        scale *= 0.5;
        if scale == 0.0 {
            break;
        }
    }
    GreenValue {
        value: 0.0,
        below_resolution: true,
        iterations: GREEN_BUDGET,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<Complex64>,
    pub escaped: bool,
}

/// `[0, c, c^2 + c, ...]` with `n + 1` entries, cut short after the first
/// point beyond the escape radius.
pub fn critical_orbit(map: &QuadraticMap, n: usize) -> Orbit {
    let mut points = Vec::with_capacity(n + 1);
    let mut z = Complex64::new(0.0, 0.0);
    points.push(z);
    for _ in 0..n {
        z = map.apply(z);
        points.push(z);
        if z.norm() > map.escape_radius {
            return Orbit {
                points,
                escaped: true,
            };
        }
    }
    Orbit {
        points,
        escaped: false,
    }
}

/// Least `P <= max_period` with `|f^P(0)| <= tol`.
pub fn critical_period(map: &QuadraticMap, max_period: usize, tol: f64) -> Option<usize> {
    let mut z = map.c;
    for p in 1..=max_period {
        if z.norm() <= tol {
            return Some(p);
        }
        z = map.apply(z);
        if z.norm() > map.escape_radius {
            return None;
        }
    }
    None
}

pub(crate) fn require_repelling(map: &QuadraticMap) -> Result<()> {
    if map.alpha_is_repelling() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "alpha fixed point is not repelling at c = {} (|multiplier| = {:.6})",
            map.c,
            map.alpha_multiplier().norm()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fixed_points() {
        let m = QuadraticMap::real(-1.0);
        let a = (1.0 - 5f64.sqrt()) / 2.0;
        assert!((m.alpha - c(a, 0.0)).norm() < 1e-15);
        assert!((m.apply(m.beta) - m.beta).norm() < 1e-14);
        assert!(m.escape_radius >= 3.0);
        assert!(m.alpha_is_repelling());
        assert!(!QuadraticMap::real(0.0).alpha_is_repelling());
    }

    #[test]
    fn green_examples() {
        let m0 = QuadraticMap::real(0.0);
        let z = Complex64::from_polar(std::f64::consts::E, 0.7);
        assert!((green(&m0, z).value - 1.0).abs() < 1e-12);
        let g = green(&m0, c(0.5, 0.0));
        assert_eq!(g.value, 0.0);
        assert!(g.below_resolution);
        let m1 = QuadraticMap::real(-1.0);
        assert!((m1.green(c(10.0, 0.0)) - 10f64.ln()).abs() < 0.02);
    }

    #[test]
    fn green_functional_equation() {
        let m = QuadraticMap::new(c(-0.12, 0.74));
        for &z in &[c(1.3, 0.2), c(-0.4, 1.1), c(2.0, -2.0)] {
            let g = m.green(z);
            assert!((m.green(m.apply(z)) - 2.0 * g).abs() < 1e-12 * (1.0 + g));
        }
    }

    #[test]
    fn critical_orbit_examples() {
        let o = critical_orbit(&QuadraticMap::real(0.0), 3);
        assert_eq!(o.points, vec![c(0.0, 0.0); 4]);
        let o = critical_orbit(&QuadraticMap::real(-1.0), 4);
        assert_eq!(
            o.points,
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]
        );
        let o = critical_orbit(&QuadraticMap::real(-2.0), 3);
        assert_eq!(o.points, vec![c(0.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        assert!(!o.escaped);
        let o = critical_orbit(&QuadraticMap::real(1.0), 10);
        assert!(o.escaped);
        assert!(o.points.len() < 11);
    }

    #[test]
    fn preperiodic_refinement() {
        let m = QuadraticMap::real(-1.0);
        let a = m.refine_preperiodic(c(-0.6, 0.01), 0, 1).unwrap();
        assert!((a - m.alpha).norm() < 1e-14);
        let a1 = m.refine_preperiodic(c(0.6, 0.01), 1, 1).unwrap();
        assert!((a1 + m.alpha).norm() < 1e-14);
    }
}
