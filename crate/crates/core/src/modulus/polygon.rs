//! Annuli bounded by closed polylines, such as truncated puzzle pieces.

use std::sync::Arc;

use num_complex::Complex64;

use super::grid::{cartesian_layout, log_polar_layout, GridDomain};
use super::solver::Rasterize;
use crate::error::{Error, Result};

/// The region inside `outer` and outside every polygon of `inner`.
#[derive(Clone, Debug)]
pub struct PolygonAnnulus {
    pub inner: Vec<Arc<Vec<Complex64>>>,
    pub outer: Arc<Vec<Complex64>>,
    /// A point inside the inner region; when given, the grid is log-polar
    /// around it, which resolves thin pieces near it much better.
    pub center: Option<Complex64>,
}

impl Rasterize for PolygonAnnulus {
    fn raster(&self, longest: usize) -> Result<GridDomain> {
        if self.outer.len() < 3 || self.inner.iter().any(|p| p.len() < 3) {
            return Err(Error::Argument("polygons need at least three vertices".into()));
        }
        let (frame, size, spacing) = match self.center {
            Some(c) => {
                let near = self
                    .inner
                    .iter()
                    .flat_map(|p| p.iter())
                    .map(|z| (z - c).norm())
                    .fold(f64::INFINITY, f64::min);
                let far = self.outer.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
                if !(near > 0.0) {
                    return Err(Error::Argument("the center lies on an inner boundary".into()));
                }
                log_polar_layout(c, (0.5 * near, 1.02 * far), longest)
            }
            None => {
                let (mut lo, mut hi) = (self.outer[0], self.outer[0]);
                for z in self.outer.iter() {
                    lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
                    hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
                }
                let pad = 0.02 * (hi - lo).norm();
                cartesian_layout((lo.re - pad, hi.re + pad), (lo.im - pad, hi.im + pad), longest, false)
            }
        };
        let inner: Vec<&[Complex64]> = self.inner.iter().map(|p| p.as_slice()).collect();
        GridDomain::from_polygons(frame, size, spacing, &inner, &self.outer)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::modulus::{annulus_modulus, GridParams};

    fn circle(c: Complex64, r: f64, n: usize) -> Arc<Vec<Complex64>> {
        Arc::new((0..n).map(|k| c + Complex64::from_polar(r, TAU * k as f64 / n as f64)).collect())
    }

    #[test]
    fn polygonal_round_annulus_in_both_frames() {
        let o = Complex64::new(0.0, 0.0);
        let exact = 3f64.ln() / TAU;
        for center in [None, Some(Complex64::new(0.1, 0.05))] {
            let a = PolygonAnnulus {
                inner: vec![circle(o, 1.0, 4000)],
                outer: circle(o, 3.0, 4000),
                center,
            };
            let p = GridParams {
                longest: 256,
                coarse: 128,
                ..GridParams::default()
            };
            let m = annulus_modulus(&a, &p).unwrap();
            assert!((m.value - exact).abs() < 0.01 * exact, "{center:?}: {m}");
        }
    }
}
