//! Explicit domains with known (or bracketed) moduli.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Cell, Frame, GridDomain, GridParams, Mode};
use super::solver::{annulus_modulus, quad_modulus, Rasterize};
use super::Modulus;
use crate::error::{Error, Result};

fn ring(d: f64, inner: f64, outer: f64) -> Cell {
    if d < inner {
        Cell::Fixed(0)
    } else if d > outer {
        Cell::Fixed(1)
    } else {
        Cell::Free
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameKind {
    Cartesian,
    LogPolar,
}

/// `r < |z - center| < big`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundAnnulus {
    pub center: Complex64,
    pub r: f64,
    pub big: f64,
    pub frame: FrameKind,
}

impl RoundAnnulus {
    pub fn with_modulus(m: f64, frame: FrameKind) -> Self {
        RoundAnnulus {
            center: Complex64::new(0.0, 0.0),
            r: 1.0,
            big: (TAU * m).exp(),
            frame,
        }
    }

    pub fn exact(&self) -> f64 {
        (self.big / self.r).ln() / TAU
    }
}

impl Rasterize for RoundAnnulus {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let (c, r, big) = (self.center, self.r, self.big);
        let classify = move |z: Complex64| ring((z - c).norm(), r, big);
        match self.frame {
            FrameKind::Cartesian => {
                let w = big * (1.0 + 2.0 / longest as f64);
                GridDomain::cartesian((c.re - w, c.re + w), (c.im - w, c.im + w), longest, false, Mode::Annulus, classify)
            }
            FrameKind::LogPolar => {
                // Cell faces on both circles, one fixed column on each side.
                let s = (big / r).ln();
                let h0 = s.max(TAU) / longest as f64;
                let inner = ((s / h0).round() as usize).max(1);
                let hx = s / inner as f64;
                let ny = ((TAU / h0).round() as usize).max(8).next_power_of_two();
                GridDomain::from_classifier(
                    Frame::LogPolar { re: c.re, im: c.im, s0: r.ln() - hx },
                    (inner + 2, ny),
                    (hx, TAU / ny as f64),
                    Mode::Annulus,
                    classify,
                )
            }
        }
    }
}

/// Inner disk `|z - d| < r1` inside the outer disk `|z| < r2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EccentricAnnulus {
    pub d: Complex64,
    pub r1: f64,
    pub r2: f64,
}

impl EccentricAnnulus {
    pub fn exact(&self) -> f64 {
        let d = self.d.norm();
        ((self.r1 * self.r1 + self.r2 * self.r2 - d * d) / (2.0 * self.r1 * self.r2)).acosh() / TAU
    }

    /// Image under `z -> a z + b`.
    pub fn affine(&self, a: Complex64, b: Complex64) -> AffineImage {
        AffineImage { base: *self, a, b }
    }
}

impl Rasterize for EccentricAnnulus {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        self.affine(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).raster(longest)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineImage {
    pub base: EccentricAnnulus,
    pub a: Complex64,
    pub b: Complex64,
}

impl Rasterize for AffineImage {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let e = self.base;
        let (a, b) = (self.a, self.b);
        let w = e.r2 * a.norm() * 1.02;
        GridDomain::cartesian((b.re - w, b.re + w), (b.im - w, b.im + w), longest, false, Mode::Annulus, move |z| {
            let p = (z - b) / a;
            if (p - e.d).norm() < e.r1 {
                Cell::Fixed(0)
            } else if p.norm() > e.r2 {
                Cell::Fixed(1)
            } else {
                Cell::Free
            }
        })
    }
}

/// Annulus between a disk `|w - c0| < r1` (containing 0) and either a
/// circle `|w| = r2` or a square `max(|Re w|, |Im w|) = r2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub c0: Complex64,
    pub r1: f64,
    pub r2: f64,
    pub square: bool,
}

impl Target {
    pub fn classify(&self, w: Complex64) -> Cell {
        if (w - self.c0).norm() < self.r1 {
            Cell::Fixed(0)
        } else if (self.square && w.re.abs().max(w.im.abs()) > self.r2) || (!self.square && w.norm() > self.r2) {
            Cell::Fixed(1)
        } else {
            Cell::Free
        }
    }

    /// Closed form when both boundaries are circles.
    pub fn exact(&self) -> Option<f64> {
        (!self.square).then(|| {
            EccentricAnnulus {
                d: self.c0,
                r1: self.r1,
                r2: self.r2,
            }
            .exact()
        })
    }
}

/// Preimage of a [`Target`] under `z -> z^n`: a degree-`n` covering of
/// annuli, so its modulus is the target's divided by `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerPreimage {
    pub n: u32,
    pub target: Target,
}

impl Rasterize for PowerPreimage {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let t = self.target;
        if t.c0.norm() >= t.r1 {
            return Err(Error::Argument("the inner disk must contain the critical value 0".into()));
        }
        let k = f64::from(self.n).recip();
        let lo = (t.r1 - t.c0.norm()).powf(k) * 0.95;
        let outer = if t.square { t.r2 * 2f64.sqrt() } else { t.r2 };
        let hi = outer.powf(k) * 1.05;
        let n = self.n as i32;
        GridDomain::log_polar(Complex64::new(0.0, 0.0), (lo, hi), longest, Mode::Annulus, move |z| {
            t.classify(z.powi(n))
        })
    }
}

/// Rectangle `[0, a] x [0, h]`; curves join the horizontal sides, or the
/// vertical ones when `swapped`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub a: f64,
    pub h: f64,
    pub swapped: bool,
}

impl Rectangle {
    pub fn exact(&self) -> f64 {
        if self.swapped {
            self.a / self.h
        } else {
            self.h / self.a
        }
    }
}

impl Rasterize for Rectangle {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let (a, h, swapped) = (self.a, self.h, self.swapped);
        let h0 = a.max(h) / longest as f64;
        let nx = ((a / h0).round() as usize).max(2);
        let ny = ((h / h0).round() as usize).max(2);
        let (hx, hy) = (a / nx as f64, h / ny as f64);
        GridDomain::from_classifier(
            Frame::Cartesian { x0: -hx, y0: -hy, periodic_x: false },
            (nx + 2, ny + 2),
            (hx, hy),
            Mode::Quadrilateral,
            move |z| {
                let (t, lo, hi) = if swapped { (z.re, z.im, h) } else { (z.im, z.re, a) };
                let end = if swapped { a } else { h };
                if !(0.0..hi).contains(&lo) {
                    Cell::Outside
                } else if t < 0.0 {
                    Cell::Fixed(0)
                } else if t > end {
                    Cell::Fixed(1)
                } else {
                    Cell::Free
                }
            },
        )
    }
}

/// The L-shaped hexagon `[0,2]x[0,1] ∪ [0,1]x[1,2]` as a quadrilateral:
/// from the bottom edge to the top of the vertical arm, or (swapped) from
/// the left edge to the three edges facing the notch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LShape {
    pub swapped: bool,
}

impl Rasterize for LShape {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let swapped = self.swapped;
        let n = longest.max(4) & !1;
        let h = 2.0 / n as f64;
        GridDomain::from_classifier(
            Frame::Cartesian { x0: -h, y0: -h, periodic_x: false },
            (n + 2, n + 2),
            (h, h),
            Mode::Quadrilateral,
            move |z| {
                let (x, y) = (z.re, z.im);
                let inside = (0.0..2.0).contains(&x) && (0.0..2.0).contains(&y) && (x < 1.0 || y < 1.0);
                if inside {
                    return Cell::Free;
                }
                let label = if swapped {
                    if x < 0.0 && (0.0..2.0).contains(&y) {
                        Some(0)
                    } else if x > 1.0 && y > 0.0 && !(y > 2.0 && x > 2.0) {
                        Some(1)
                    } else {
                        None
                    }
                } else if y < 0.0 && (0.0..2.0).contains(&x) {
                    Some(0)
                } else if y > 2.0 && (0.0..1.0).contains(&x) {
                    Some(1)
                } else {
                    None
                };
                label.map_or(Cell::Outside, Cell::Fixed)
            },
        )
    }
}

/// Concentric squares of half-sides `inner < outer`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareFrame {
    pub inner: f64,
    pub outer: f64,
}

impl Rasterize for SquareFrame {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let (a, b) = (self.inner, self.outer);
        // Cell faces on both squares: 2b/h cells across, with b/h and a/h
        // integers.
        let per = ((longest as f64 / 2.0) / (b / a)).round().max(1.0);
        let h = a / per;
        let n = (2.0 * b / h).round() as usize;
        GridDomain::from_classifier(
            Frame::Cartesian { x0: -b - h, y0: -b - h, periodic_x: false },
            (n + 2, n + 2),
            (h, h),
            Mode::Annulus,
            move |z| ring(z.re.abs().max(z.im.abs()), a, b),
        )
    }
}

/// The strip `0 < Im z < h` as a quadrilateral with sides `(0, a)` and the
/// top line, truncated `margin * h` beyond each end of the base with free
/// ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub h: f64,
    pub a: f64,
    pub margin: f64,
}

pub const STRIP_MARGIN: f64 = 10.0;

impl Strip {
    pub fn new(h: f64, a: f64) -> Self {
        Strip { h, a, margin: STRIP_MARGIN }
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.h / (2.0 * self.a), self.h / self.a)
    }
}

impl Rasterize for Strip {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let (h, a) = (self.h, self.a);
        // The cell size depends only on the standard truncation, so the
        // wider control run differs in extent only.
        let reference = a + 2.0 * STRIP_MARGIN * h;
        let base = ((longest as f64 * a / reference).round() as usize).max(2);
        let hx = a / base as f64;
        let side = (self.margin * h / hx).round() as usize;
        let ny = ((h / hx).round() as usize).max(4);
        let hy = h / ny as f64;
        let x0 = -(side as f64) * hx;
        GridDomain::from_classifier(
            Frame::Cartesian { x0, y0: -hy, periodic_x: false },
            (base + 2 * side, ny + 2),
            (hx, hy),
            Mode::Quadrilateral,
            move |z| {
                if z.im > h {
                    Cell::Fixed(1)
                } else if z.im > 0.0 {
                    Cell::Free
                } else if (0.0..a).contains(&z.re) {
                    Cell::Fixed(0)
                } else {
                    Cell::Outside
                }
            },
        )
    }
}

/// Strip modulus with the refinement error plus the change under doubling
/// the truncation margin.
pub fn strip_modulus(strip: &Strip, params: &GridParams) -> Result<Modulus> {
    let m = quad_modulus(strip, params)?;
    let wide = Strip {
        margin: 2.0 * strip.margin,
        ..*strip
    };
    let control = quad_modulus(&wide, &GridParams { coarse: params.longest, ..*params })?;
    Ok(Modulus::new(m.value, m.error + (m.value - control.value).abs()))
}

/// The flat cylinder `(R / l Z) x (0, h)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    pub h: f64,
    pub l: f64,
}

impl Cylinder {
    pub fn exact(&self) -> f64 {
        self.h / self.l
    }
}

impl Rasterize for Cylinder {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let (h, l) = (self.h, self.l);
        let h0 = h.max(l) / longest as f64;
        let nx = (((l / h0).round() as usize).max(2) + 1) & !1;
        let ny = ((h / h0).round() as usize).max(2);
        let hy = h / ny as f64;
        GridDomain::from_classifier(
            Frame::Cartesian { x0: 0.0, y0: -hy, periodic_x: true },
            (nx, ny + 2),
            (l / nx as f64, hy),
            Mode::Annulus,
            move |z| ring(z.im + h, h, 2.0 * h),
        )
    }
}

/// Disjoint disk islands `|z - p_i| < rho_i` in the disk `|z| < big`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Islands {
    pub big: f64,
    pub islands: Vec<(Complex64, f64)>,
}

impl Islands {
    /// `m` islands of radius `rho` evenly spaced on the circle of radius
    /// `d`.
    pub fn symmetric(m: usize, d: f64, rho: f64, big: f64) -> Self {
        Islands {
            big,
            islands: (0..m)
                .map(|k| (Complex64::from_polar(d, TAU * k as f64 / m as f64), rho))
                .collect(),
        }
    }

    /// Exact modulus of the container minus island `i`.
    pub fn island_modulus(&self, i: usize) -> f64 {
        let (p, rho) = self.islands[i];
        EccentricAnnulus { d: p, r1: rho, r2: self.big }.exact()
    }

    /// Largest round collar `rho_i < |z - p_i| < R_i` around island `i`
    /// avoiding the other islands and the outer circle; its modulus.
    pub fn collar_modulus(&self, i: usize) -> f64 {
        let (p, rho) = self.islands[i];
        let mut reach = self.big - p.norm();
        for (j, &(q, s)) in self.islands.iter().enumerate() {
            if j != i {
                reach = reach.min((p - q).norm() - s);
            }
        }
        (reach / rho).ln() / TAU
    }
}

impl Rasterize for Islands {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        let big = self.big;
        let islands = self.islands.clone();
        let w = big * (1.0 + 2.0 / longest as f64);
        GridDomain::cartesian((-w, w), (-w, w), longest, false, Mode::Annulus, move |z| {
            if islands.iter().any(|(p, rho)| (z - p).norm() < *rho) {
                Cell::Fixed(0)
            } else if z.norm() > big {
                Cell::Fixed(1)
            } else {
                Cell::Free
            }
        })
    }
}

/// Modulus of an annular fixture (convenience wrapper).
pub fn modulus_of(fixture: &dyn Rasterize, params: &GridParams) -> Result<Modulus> {
    annulus_modulus(fixture, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> GridParams {
        GridParams {
            longest: n,
            coarse: n / 2,
            ..GridParams::default()
        }
    }

    fn close(m: Modulus, exact: f64, tol: f64) -> bool {
        (m.value - exact).abs() <= tol * exact
    }

    #[test]
    fn log_polar_round_annuli() {
        for m in [0.05, 0.5, 2.0] {
            let f = RoundAnnulus::with_modulus(m, FrameKind::LogPolar);
            let v = annulus_modulus(&f, &params(128)).unwrap();
            assert!(close(v, m, 1e-6), "{m}: {v}");
        }
    }

    #[test]
    fn rectangles_and_reciprocals() {
        for (a, h) in [(1.0, 0.1), (1.0, 2.0)] {
            for swapped in [false, true] {
                let r = Rectangle { a, h, swapped };
                let v = quad_modulus(&r, &params(128)).unwrap();
                assert!(close(v, r.exact(), 1e-6), "{r:?}: {v}");
            }
        }
    }

    #[test]
    fn l_shape_reciprocal_identity() {
        let p = params(256);
        let a = quad_modulus(&LShape { swapped: false }, &p).unwrap();
        let b = quad_modulus(&LShape { swapped: true }, &p).unwrap();
        assert!((a.value * b.value - 1.0).abs() < 0.02, "{a} x {b}");
    }

    #[test]
    fn eccentric_annulus_and_its_affine_image() {
        let e = EccentricAnnulus {
            d: Complex64::new(0.4, 0.1),
            r1: 0.5,
            r2: 2.0,
        };
        let p = params(256);
        let v = annulus_modulus(&e, &p).unwrap();
        assert!(close(v, e.exact(), 0.01), "{v} vs {}", e.exact());
        let img = e.affine(Complex64::new(0.3, -1.2), Complex64::new(5.0, 2.0));
        let w = annulus_modulus(&img, &p).unwrap();
        assert!((v.value - w.value).abs() <= v.error + w.error + 1e-3 * v.value, "{v} vs {w}");
    }

    #[test]
    fn square_preimage_halves_the_modulus() {
        let t = Target {
            c0: Complex64::new(0.2, 0.1),
            r1: 0.6,
            r2: 2.0,
            square: false,
        };
        let p = params(256);
        let target = annulus_modulus(&PowerPreimage { n: 1, target: t }, &p).unwrap();
        let pre = annulus_modulus(&PowerPreimage { n: 2, target: t }, &p).unwrap();
        assert!(close(target, t.exact().unwrap(), 0.01));
        assert!(close(pre, target.value / 2.0, 0.02), "{pre} vs {target}");
    }

    #[test]
    fn strip_lies_between_its_bounds() {
        let s = Strip::new(0.25, 1.0);
        let v = strip_modulus(&s, &params(256)).unwrap();
        let (lo, hi) = s.bounds();
        assert!(lo <= v.lo() && v.hi() <= hi, "{v}");
    }

    #[test]
    fn cylinder_is_exact() {
        let c = Cylinder { h: 0.3, l: 1.0 };
        let v = annulus_modulus(&c, &params(128)).unwrap();
        assert!(close(v, 0.3, 1e-6), "{v}");
    }

    #[test]
    fn islands_exceed_each_single_island_bound() {
        let f = Islands::symmetric(2, 1.0, 0.2, 3.0);
        let v = annulus_modulus(&f, &params(256)).unwrap();
        assert!(v.value < f.island_modulus(0));
        assert!(f.collar_modulus(0) > 0.0);
    }
}
