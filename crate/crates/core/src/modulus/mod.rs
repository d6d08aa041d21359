//! Conformal moduli of annuli and quadrilaterals computed on grids, with the
//! harmonic-sum calculus and the classical comparison laws.

pub mod fixtures;
pub mod grid;
pub mod laws;
pub mod polygon;
pub mod solver;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use grid::{Cell, Frame, GridDomain, GridParams, Mode};
pub use polygon::PolygonAnnulus;
pub use solver::{annulus_modulus, quad_modulus, solve, Rasterize, Solution};

/// A modulus (extremal length) with an error bar; `value` may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub value: f64,
    pub error: f64,
}

impl Modulus {
    pub fn exact(value: f64) -> Self {
        Modulus { value, error: 0.0 }
    }

    pub fn new(value: f64, error: f64) -> Self {
        Modulus { value, error }
    }

    pub fn infinite() -> Self {
        Modulus::exact(f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        (self.value - self.error).max(0.0)
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }

    pub fn relative_error(&self) -> f64 {
        self.error / self.value
    }

    pub fn scaled(&self, k: f64) -> Modulus {
        Modulus::new(self.value * k, self.error * k.abs())
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.2e}", self.value, self.error)
    }
}

fn inv(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// `(1/x + 1/y)^{-1}` with `1/0 = inf`, `1/inf = 0`; error bars propagated
/// to first order.
pub fn harmonic_sum(x: Modulus, y: Modulus) -> Modulus {
    let value = inv(inv(x.value) + inv(y.value));
    let dx = if x.value.is_finite() && x.value > 0.0 {
        (value / x.value).powi(2) * x.error
    } else {
        0.0
    };
    let dy = if y.value.is_finite() && y.value > 0.0 {
        (value / y.value).powi(2) * y.error
    } else {
        0.0
    };
    Modulus::new(value, dx + dy)
}

/// `(1/x - 1/y)^{-1}`; equal arguments give infinity, reported by the flag.
pub fn harmonic_diff(x: Modulus, y: Modulus) -> (Modulus, bool) {
    let d = inv(x.value) - inv(y.value);
    if d == 0.0 {
        return (Modulus::infinite(), true);
    }
    let value = 1.0 / d;
    let dx = if x.value.is_finite() && x.value > 0.0 {
        (value / x.value).powi(2) * x.error
    } else {
        0.0
    };
    let dy = if y.value.is_finite() && y.value > 0.0 {
        (value / y.value).powi(2) * y.error
    } else {
        0.0
    };
    (Modulus::new(value, dx + dy), false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Combine {
    /// Quadrilaterals side by side: widths add, lengths sum harmonically.
    Width,
    /// Quadrilaterals stacked end to end: lengths add.
    Length,
}

/// Extremal length of quadrilaterals glued side by side.
pub fn parallel_law(values: &[Modulus], mode: Combine) -> Modulus {
    match mode {
        Combine::Width => series_law(values),
        Combine::Length => values[1..].iter().fold(values[0], |a, b| harmonic_sum(a, *b)),
    }
}

/// Extremal length of quadrilaterals stacked in series: lengths add.
pub fn series_law(values: &[Modulus]) -> Modulus {
    values.iter().fold(Modulus::exact(0.0), |a, b| {
        Modulus::new(a.value + b.value, a.error + b.error)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: f64) -> Modulus {
        Modulus::exact(x)
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_sum(m(1.0), m(1.0)).value, 0.5);
        assert_eq!(harmonic_sum(m(0.7), Modulus::infinite()).value, 0.7);
        assert_eq!(harmonic_sum(m(0.0), m(3.0)).value, 0.0);
        let (d, flag) = harmonic_diff(m(2.0), m(3.0));
        assert!((d.value - 6.0).abs() < 1e-12 && !flag);
        let (d, flag) = harmonic_diff(m(2.0), m(2.0));
        assert!(d.value.is_infinite() && flag);
    }

    #[test]
    fn laws() {
        assert_eq!(parallel_law(&[m(1.0), m(1.0)], Combine::Length).value, 0.5);
        assert_eq!(series_law(&[m(0.2), m(0.3)]).value, 0.5);
        assert_eq!(parallel_law(&[m(0.4)], Combine::Length), m(0.4));
        assert_eq!(series_law(&[m(0.4)]), m(0.4));
    }

    #[test]
    fn error_bars_propagate() {
        let s = harmonic_sum(Modulus::new(1.0, 0.1), Modulus::new(1.0, 0.1));
        assert!((s.error - 0.05).abs() < 1e-12);
    }
}
