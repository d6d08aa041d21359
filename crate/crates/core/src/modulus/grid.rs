//! Cell-centered grids carrying a doubly connected domain (annulus mode) or
//! a quadrilateral, in a Cartesian or a log-polar frame.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    /// Not part of the domain; edges to it carry no flux.
    Outside,
    Free,
    /// Dirichlet value 0 (inner boundary, side a) or 1 (outer, side b).
    Fixed(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Annulus,
    Quadrilateral,
}

/// Placement of the grid in the plane. In the log-polar frame the grid
/// coordinates are `(log |z - center|, arg(z - center))`; the modulus is
/// conformally invariant, so the discrete problem is posed there directly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Frame {
    Cartesian { x0: f64, y0: f64, periodic_x: bool },
    LogPolar { re: f64, im: f64, s0: f64 },
}

/// Resolution settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Cells along the longest dimension of the fine grid.
    pub longest: usize,
    /// Cells along the longest dimension of the control grid. Equal to
    /// `longest`, the control run is skipped and the error bar is zero.
    pub coarse: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            longest: 1024,
            coarse: 512,
            tolerance: 1e-10,
            max_iterations: 2000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridDomain {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub frame: Frame,
    pub mode: Mode,
    pub cells: Vec<Cell>,
}

impl GridDomain {
    pub fn periodic_x(&self) -> bool {
        matches!(self.frame, Frame::Cartesian { periodic_x: true, .. })
    }

    pub fn periodic_y(&self) -> bool {
        matches!(self.frame, Frame::LogPolar { .. })
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Grid coordinates of the center of cell `(i, j)`.
    pub fn local_center(&self, i: usize, j: usize) -> (f64, f64) {
        let (x, y) = ((i as f64 + 0.5) * self.hx, (j as f64 + 0.5) * self.hy);
        match self.frame {
            Frame::Cartesian { x0, y0, .. } => (x0 + x, y0 + y),
            Frame::LogPolar { s0, .. } => (s0 + x, y),
        }
    }

    /// Center of cell `(i, j)` in the plane.
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        let (x, y) = self.local_center(i, j);
        match self.frame {
            Frame::Cartesian { .. } => Complex64::new(x, y),
            Frame::LogPolar { re, im, .. } => Complex64::new(re, im) + Complex64::from_polar(x.exp(), y),
        }
    }

    /// Grid with cells labelled by `classify` at their centers.
    pub fn from_classifier(
        frame: Frame,
        (nx, ny): (usize, usize),
        (hx, hy): (f64, f64),
        mode: Mode,
        classify: impl Fn(Complex64) -> Cell,
    ) -> Result<Self> {
        let mut g = GridDomain::blank(frame, (nx, ny), (hx, hy), mode)?;
        for j in 0..ny {
            for i in 0..nx {
                let k = g.index(i, j);
                g.cells[k] = classify(g.center(i, j));
            }
        }
        g.finish()
    }

    fn blank(frame: Frame, (nx, ny): (usize, usize), (hx, hy): (f64, f64), mode: Mode) -> Result<Self> {
        if nx == 0 || ny == 0 || !(hx > 0.0) || !(hy > 0.0) {
            return Err(Error::Argument(format!(
                "grid needs positive size, got {nx}x{ny} cells of {hx}x{hy}"
            )));
        }
        Ok(GridDomain {
            nx,
            ny,
            hx,
            hy,
            frame,
            mode,
            cells: vec![Cell::Outside; nx * ny],
        })
    }

    /// Cartesian grid over `[x0, x1] x [y0, y1]` with about `longest` cells
    /// along the longer side.
    pub fn cartesian(
        xs: (f64, f64),
        ys: (f64, f64),
        longest: usize,
        periodic_x: bool,
        mode: Mode,
        classify: impl Fn(Complex64) -> Cell,
    ) -> Result<Self> {
        let (frame, size, spacing) = cartesian_layout(xs, ys, longest, periodic_x);
        GridDomain::from_classifier(frame, size, spacing, mode, classify)
    }

    /// Log-polar grid around `center` covering `r0 <= |z - center| <= r1`.
    pub fn log_polar(
        center: Complex64,
        radii: (f64, f64),
        longest: usize,
        mode: Mode,
        classify: impl Fn(Complex64) -> Cell,
    ) -> Result<Self> {
        let (frame, size, spacing) = log_polar_layout(center, radii, longest);
        GridDomain::from_classifier(frame, size, spacing, mode, classify)
    }

    /// Grid labelled by polygons: inside any of `inner` is fixed at 0,
    /// outside `outer` is fixed at 1, the rest is free.
    pub fn from_polygons(
        frame: Frame,
        size: (usize, usize),
        spacing: (f64, f64),
        inner: &[&[Complex64]],
        outer: &[Complex64],
    ) -> Result<Self> {
        let mut g = GridDomain::blank(frame, size, spacing, Mode::Annulus)?;
        let mut w_in = vec![0i32; g.nx * g.ny];
        for poly in inner {
            for (k, w) in g.winding_field(poly).into_iter().enumerate() {
                w_in[k] += w;
            }
        }
        let w_out = g.winding_field(outer);
        for k in 0..g.cells.len() {
            g.cells[k] = if w_in[k] != 0 {
                Cell::Fixed(0)
            } else if w_out[k] == 0 {
                Cell::Fixed(1)
            } else {
                Cell::Free
            };
        }
        g.finish()
    }

    /// Winding number of `poly` around every cell center, by crossings of
    /// the grid rows (lines of constant `y`, or rays of constant angle).
    pub fn winding_field(&self, poly: &[Complex64]) -> Vec<i32> {
        let mut rows: Vec<Vec<(f64, i32)>> = vec![Vec::new(); self.ny];
        let n = poly.len();
        for e in 0..n {
            let (a, b) = (poly[e], poly[(e + 1) % n]);
            for j in self.rows_near(a, b) {
                if let Some(c) = self.row_crossing(j, a, b) {
                    rows[j].push(c);
                }
            }
        }
        let mut out = vec![0i32; self.nx * self.ny];
        for (j, row) in rows.iter_mut().enumerate() {
            row.sort_by(|x, y| x.0.total_cmp(&y.0));
            // Winding at x is the signed count of crossings beyond x.
            let mut total: i32 = row.iter().map(|c| c.1).sum();
            let mut k = 0;
            for i in 0..self.nx {
                let (x, _) = self.local_center(i, j);
                while k < row.len() && row[k].0 <= x {
                    total -= row[k].1;
                    k += 1;
                }
                out[j * self.nx + i] = total;
            }
        }
        out
    }

    /// Rows whose line may meet the segment `ab`.
    fn rows_near(&self, a: Complex64, b: Complex64) -> std::ops::Range<usize> {
        match self.frame {
            Frame::Cartesian { y0, .. } => {
                let lo = ((a.im.min(b.im) - y0) / self.hy - 0.5).floor().max(0.0);
                let hi = ((a.im.max(b.im) - y0) / self.hy - 0.5).ceil() + 1.0;
                (lo as usize).min(self.ny)..(hi.max(0.0) as usize).min(self.ny)
            }
            Frame::LogPolar { re, im, .. } => {
                let c = Complex64::new(re, im);
                let (ta, tb) = ((a - c).arg(), (b - c).arg());
                let mut d = tb - ta;
                if d > std::f64::consts::PI {
                    d -= TAU;
                } else if d < -std::f64::consts::PI {
                    d += TAU;
                }
                if d.abs() > 1.0 {
                    return 0..self.ny;
                }
                let lo = ta.min(ta + d).rem_euclid(TAU) / self.hy - 0.5;
                let span = d.abs() / self.hy;
                let start = lo.floor() as i64;
                let end = (lo + span).ceil() as i64 + 1;
                // Wrapped ranges are returned whole; rare and harmless.
                if start < 0 || end as usize > self.ny {
                    0..self.ny
                } else {
                    start as usize..end as usize
                }
            }
        }
    }

    /// Crossing of the segment `ab` with row `j`, as (grid x, sign).
    fn row_crossing(&self, j: usize, a: Complex64, b: Complex64) -> Option<(f64, i32)> {
        let (_, yj) = self.local_center(0, j);
        let (pa, pb) = match self.frame {
            Frame::Cartesian { .. } => (a - Complex64::new(0.0, yj), b - Complex64::new(0.0, yj)),
            Frame::LogPolar { re, im, .. } => {
                let rot = Complex64::from_polar(1.0, -yj);
                let c = Complex64::new(re, im);
                ((a - c) * rot, (b - c) * rot)
            }
        };
        let sign = if pa.im <= 0.0 && pb.im > 0.0 {
            1
        } else if pa.im > 0.0 && pb.im <= 0.0 {
            -1
        } else {
            return None;
        };
        let t = pa.im / (pa.im - pb.im);
        let x = pa.re + t * (pb.re - pa.re);
        match self.frame {
            Frame::Cartesian { .. } => Some((x, sign)),
            Frame::LogPolar { .. } => (x > 0.0).then(|| (x.ln(), sign)),
        }
    }

    fn neighbors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = (k % self.nx, k / self.nx);
        let (px, py) = (self.periodic_x(), self.periodic_y());
        let left = if i > 0 {
            Some(k - 1)
        } else if px && self.nx > 1 {
            Some(k + self.nx - 1)
        } else {
            None
        };
        let right = if i + 1 < self.nx {
            Some(k + 1)
        } else if px && self.nx > 1 {
            Some(k + 1 - self.nx)
        } else {
            None
        };
        let down = if j > 0 {
            Some(k - self.nx)
        } else if py && self.ny > 1 {
            Some(k + self.nx * (self.ny - 1))
        } else {
            None
        };
        let up = if j + 1 < self.ny {
            Some(k + self.nx)
        } else if py && self.ny > 1 {
            Some(i)
        } else {
            None
        };
        [left, right, down, up].into_iter().flatten()
    }

    /// Drops free cells that no Dirichlet cell can reach, and checks that
    /// both boundary values touch the free region.
    fn finish(mut self) -> Result<Self> {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::new();
        let mut touches = [false; 2];
        for k in 0..self.cells.len() {
            if let Cell::Fixed(v) = self.cells[k] {
                for nb in self.neighbors(k).collect::<Vec<_>>() {
                    if self.cells[nb] == Cell::Free {
                        touches[v as usize] = true;
                        if !seen[nb] {
                            seen[nb] = true;
                            queue.push_back(nb);
                        }
                    }
                }
            }
        }
        while let Some(k) = queue.pop_front() {
            for nb in self.neighbors(k).collect::<Vec<_>>() {
                if self.cells[nb] == Cell::Free && !seen[nb] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        for k in 0..self.cells.len() {
            if self.cells[k] == Cell::Free && !seen[k] {
                self.cells[k] = Cell::Outside;
            }
        }
        if !touches[0] || !touches[1] {
            return Err(Error::Argument(
                "domain needs free cells touching both boundary labels".into(),
            ));
        }
        Ok(self)
    }

    pub fn free_cells(&self) -> usize {
        self.cells.iter().filter(|c| **c == Cell::Free).count()
    }
}

/// Frame, cell counts and spacings of a Cartesian grid.
pub fn cartesian_layout(
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    longest: usize,
    periodic_x: bool,
) -> (Frame, (usize, usize), (f64, f64)) {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let h = dx.max(dy) / longest as f64;
    let nx = ((dx / h).round() as usize).max(1);
    let ny = ((dy / h).round() as usize).max(1);
    (
        Frame::Cartesian { x0, y0, periodic_x },
        (nx, ny),
        (dx / nx as f64, dy / ny as f64),
    )
}

/// Frame, cell counts and spacings of a log-polar grid; the number of
/// angular cells is a power of two.
pub fn log_polar_layout(center: Complex64, (r0, r1): (f64, f64), longest: usize) -> (Frame, (usize, usize), (f64, f64)) {
    let (s0, s1) = (r0.ln(), r1.ln());
    let h = (s1 - s0).max(TAU) / longest as f64;
    let ny = ((TAU / h).round() as usize).max(8).next_power_of_two();
    let nx = (((s1 - s0) / h).round() as usize).max(1);
    (
        Frame::LogPolar { re: center.re, im: center.im, s0 },
        (nx, ny),
        ((s1 - s0) / nx as f64, TAU / ny as f64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn annulus(z: Complex64) -> Cell {
        match z.norm() {
            r if r < 1.0 => Cell::Fixed(0),
            r if r > 2.0 => Cell::Fixed(1),
            _ => Cell::Free,
        }
    }

    #[test]
    fn winding_field_matches_direct_count() {
        let circle: Vec<Complex64> = (0..200)
            .map(|k| Complex64::from_polar(1.3, TAU * k as f64 / 200.0) + Complex64::new(0.1, -0.2))
            .collect();
        for frame_polar in [false, true] {
            let g = if frame_polar {
                GridDomain::log_polar(Complex64::new(0.0, 0.0), (0.05, 3.0), 64, Mode::Annulus, annulus).unwrap()
            } else {
                GridDomain::cartesian((-3.0, 3.0), (-3.0, 3.0), 64, false, Mode::Annulus, annulus).unwrap()
            };
            let w = g.winding_field(&circle);
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let z = g.center(i, j);
                    let direct = crate::puzzle::geometry::winding_number(&circle, z) as i32;
                    assert_eq!(w[g.index(i, j)], direct, "polar={frame_polar} at {z}");
                }
            }
        }
    }

    #[test]
    fn unreachable_free_cells_are_dropped() {
        let g = GridDomain::cartesian((-3.0, 3.0), (-3.0, 3.0), 60, false, Mode::Annulus, |z| {
            if z.norm() < 1.0 {
                Cell::Fixed(0)
            } else if z.norm() < 2.0 {
                Cell::Free
            } else if z.norm() < 2.2 {
                Cell::Fixed(1)
            } else if (2.5..2.9).contains(&z.norm()) {
                Cell::Free
            } else {
                Cell::Outside
            }
        })
        .unwrap();
        let island = (0..g.cells.len())
            .find(|&k| (2.6..2.8).contains(&g.center(k % g.nx, k / g.nx).norm()))
            .unwrap();
        assert_eq!(g.cells[island], Cell::Outside);
        assert!(g.cells.contains(&Cell::Free));
    }

    #[test]
    fn missing_label_is_an_argument_error() {
        let r = GridDomain::cartesian((0.0, 1.0), (0.0, 1.0), 16, false, Mode::Quadrilateral, |z| {
            if z.im < 0.1 {
                Cell::Fixed(0)
            } else {
                Cell::Free
            }
        });
        assert!(matches!(r, Err(Error::Argument(_))));
    }
}
