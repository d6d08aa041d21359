//! Membership questions about critical-orbit points in puzzle pieces,
//! answered geometrically or, for real maps, by interval arithmetic.

use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{critical_period, QuadraticMap};
use crate::error::{Error, Result};
use crate::puzzle::{PieceFamily, Puzzle, PERIODIC_TOL, MAX_DETECTED_PERIOD};

/// Position of a point among the depth-1 pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum Depth1Class {
    Critical,
    /// `Y1[i]`, part of `L`.
    Left(usize),
    /// `Z1[i] = -Y1[i]`, part of `R`.
    Right(usize),
}

pub trait PieceOracle {
    fn q(&self) -> usize;
    fn period(&self) -> Option<usize>;
    /// `f^i(0)` and `f^j(0)` lie in the same piece of depth `depth`.
    fn same_piece(&self, i: usize, j: usize, depth: usize) -> Result<bool>;
    fn depth1_class(&self, j: usize) -> Result<Depth1Class>;
    /// Which of the two symmetric pieces `X`, `-X` of depth `depth` holds
    /// `f^j(0)`: 0 for the one whose smallest angle is smaller.
    fn side(&self, j: usize, depth: usize) -> Result<u8>;
}

/// Answers from traced puzzle pieces.
pub struct GeometricOracle<'a> {
    pub puzzle: &'a Puzzle,
    depth1: PieceFamily,
}

impl<'a> GeometricOracle<'a> {
    pub fn new(puzzle: &'a Puzzle) -> Result<Self> {
        let depth1 = puzzle.families(1)?.pop().unwrap();
        Ok(GeometricOracle { puzzle, depth1 })
    }
}

fn parse_index(label: &str, prefix: &str) -> Option<usize> {
    label.strip_prefix(prefix)?.strip_suffix(']')?.parse().ok()
}

impl PieceOracle for GeometricOracle<'_> {
    fn q(&self) -> usize {
        self.puzzle.q()
    }

    fn period(&self) -> Option<usize> {
        self.puzzle.period
    }

    fn same_piece(&self, i: usize, j: usize, depth: usize) -> Result<bool> {
        Ok(self.puzzle.orbit_piece(i, depth)? == self.puzzle.orbit_piece(j, depth)?)
    }

    fn depth1_class(&self, j: usize) -> Result<Depth1Class> {
        let p = self.puzzle.orbit_piece(j, 1)?;
        let label = &self
            .depth1
            .pieces
            .iter()
            .find(|x| **x == p)
            .ok_or_else(|| Error::Internal(format!("{p} is not a depth-1 piece")))?
            .label;
        if label == "Y[1]" {
            Ok(Depth1Class::Critical)
        } else if let Some(i) = parse_index(label, "Y1[") {
            Ok(Depth1Class::Left(i))
        } else if let Some(i) = parse_index(label, "Z1[") {
            Ok(Depth1Class::Right(i))
        } else {
            Err(Error::Internal(format!("unexpected depth-1 label {label}")))
        }
    }

    fn side(&self, j: usize, depth: usize) -> Result<u8> {
        let p = self.puzzle.orbit_piece(j, depth)?;
        let min = p.angles().into_iter().min();
        let neg = p.negated().angles().into_iter().min();
        Ok(u8::from(min >= neg))
    }
}

/// Answers for real `c < -3/4` from the real line alone: two real points
/// share a depth-`d` piece exactly when no `f^k`-image (`k <= d`) of the
/// interval between them contains alpha.
pub struct RealLineOracle {
    pub map: QuadraticMap,
    c: f64,
    alpha: f64,
    period: Option<usize>,
    orbit: Mutex<Vec<f64>>,
}

impl RealLineOracle {
    pub fn new(c: f64) -> Result<Self> {
        if !(-2.0..-0.75).contains(&c) {
            return Err(Error::Precondition(format!(
                "the real-line oracle needs -2 <= c < -3/4, got {c}"
            )));
        }
        let map = QuadraticMap::real(c);
        Ok(RealLineOracle {
            alpha: map.alpha.re,
            period: critical_period(&map, MAX_DETECTED_PERIOD, PERIODIC_TOL),
            map,
            c,
            orbit: Mutex::new(vec![0.0]),
        })
    }

    pub fn point(&self, j: usize) -> f64 {
        let j = match self.period {
            Some(p) => j % p,
            None => j,
        };
        let mut orbit = self.orbit.lock().unwrap();
        while orbit.len() <= j {
            let x = *orbit.last().unwrap();
            orbit.push(x * x + self.c);
        }
        orbit[j]
    }

    fn image(&self, (lo, hi): (f64, f64)) -> (f64, f64) {
        let (a, b) = (lo * lo + self.c, hi * hi + self.c);
        if lo <= 0.0 && hi >= 0.0 {
            (self.c, a.max(b))
        } else {
            (a.min(b), a.max(b))
        }
    }

    /// Real points `x`, `y` lie in the same depth-`depth` piece.
    pub fn same_real_piece(&self, x: f64, y: f64, depth: usize) -> bool {
        let mut iv = (x.min(y), x.max(y));
        for _ in 0..=depth {
            if iv.0 < self.alpha && self.alpha < iv.1 {
                return false;
            }
            iv = self.image(iv);
        }
        true
    }
}

impl PieceOracle for RealLineOracle {
    fn q(&self) -> usize {
        2
    }

    fn period(&self) -> Option<usize> {
        self.period
    }

    fn same_piece(&self, i: usize, j: usize, depth: usize) -> Result<bool> {
        Ok(self.same_real_piece(self.point(i), self.point(j), depth))
    }

    fn depth1_class(&self, j: usize) -> Result<Depth1Class> {
        let x = self.point(j);
        if x < self.alpha {
            Ok(Depth1Class::Left(1))
        } else if x > -self.alpha {
            Ok(Depth1Class::Right(1))
        } else if x > self.alpha && x < -self.alpha {
            Ok(Depth1Class::Critical)
        } else {
            let z = Complex64::new(x, 0.0);
            Err(Error::OnBoundary { re: z.re, im: z.im })
        }
    }

    fn side(&self, j: usize, _depth: usize) -> Result<u8> {
        Ok(u8::from(self.point(j) < 0.0))
    }
}
