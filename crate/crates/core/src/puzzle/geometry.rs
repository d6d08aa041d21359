//! Polylines of puzzle pieces and planar predicates on them.

use num_complex::Complex64;

use super::piece::PuzzlePiece;
use crate::dynamics::equipotential::arc_points;
use crate::dynamics::ray::{RayTrace, Tracer};
use crate::error::{Error, Result};

/// Relative width of the band around a boundary inside which a point is
/// reported as lying on it.
pub const BOUNDARY_BAND: f64 = 1e-6;
/// Two rays of one vertex must land this close together.
const VERTEX_MATCH_TOL: f64 = 1e-6;

/// Sample of `ray` at ladder index `k`, continuing the descent when the
/// trace stopped above it.
fn ray_point(tracer: &Tracer, ray: &RayTrace, k: i64) -> Result<Complex64> {
    if let Some(z) = ray.point_at_index(k) {
        return Ok(z);
    }
    let mut z = *ray.points.last().ok_or_else(|| Error::Landing {
        angle: ray.angle.clone(),
        reason: "empty trace".into(),
    })?;
    for i in ray.last_index() + 1..=k {
        z = tracer.point(i, &ray.angle, z).ok_or_else(|| Error::Landing {
            angle: ray.angle.clone(),
            reason: format!("continuation failed at ladder index {i}"),
        })?;
    }
    Ok(z)
}

/// Ray samples from index `k` down to and including the landing point.
fn ray_tail(tracer: &Tracer, ray: &RayTrace, k: i64) -> Result<Vec<Complex64>> {
    if k <= ray.last_index() {
        return Ok(ray.tail_from(k));
    }
    let landing = ray.landing.ok_or_else(|| Error::Landing {
        angle: ray.angle.clone(),
        reason: "ray did not land".into(),
    })?;
    Ok(vec![ray_point(tracer, ray, k)?, landing])
}

/// Counterclockwise boundary of `piece` truncated at equipotential level
/// `level`.
pub fn piece_polygon(tracer: &Tracer, piece: &PuzzlePiece, level: usize) -> Result<Vec<Complex64>> {
    let k = tracer.params.index_of_truncation(level);
    let g = tracer.params.level(k);
    let n = piece.vertices.len();
    let mut rays = Vec::with_capacity(n);
    for v in &piece.vertices {
        let ra = tracer.landed_ray(&v.a)?;
        let rb = tracer.landed_ray(&v.b)?;
        let (la, lb) = (ra.landing.unwrap(), rb.landing.unwrap());
        if (la - lb).norm() > VERTEX_MATCH_TOL {
            return Err(Error::Landing {
                angle: v.b.clone(),
                reason: format!(
                    "lands at {lb} but its partner {} lands at {la}",
                    v.a
                ),
            });
        }
        rays.push((ra, rb));
    }
    let mut poly = Vec::new();
    for i in 0..n {
        let prev_b = &rays[(i + n - 1) % n].1;
        let (ra, rb) = &rays[i];
        let start = ray_point(tracer, prev_b, k)?;
        let arc = arc_points(
            &tracer.map,
            &tracer.params,
            g,
            &piece.vertices[(i + n - 1) % n].b,
            &piece.vertices[i].a,
            start,
        )
        .ok_or_else(|| Error::Numeric(format!("equipotential arc of {} diverged", piece.label)))?;
        poly.extend_from_slice(&arc[..arc.len() - 1]);
        let down = ray_tail(tracer, ra, k)?;
        poly.extend_from_slice(&down);
        let mut up = ray_tail(tracer, rb, k)?;
        up.pop();
        up.reverse();
        up.pop();
        poly.extend(up);
    }
    Ok(poly)
}

/// Signed crossing count of a closed polyline around `z`.
pub fn winding_number(poly: &[Complex64], z: Complex64) -> i64 {
    let mut w = 0i64;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let cross = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
        if a.im <= z.im {
            if b.im > z.im && cross > 0.0 {
                w += 1;
            }
        } else if b.im <= z.im && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

pub fn distance_to_polyline(poly: &[Complex64], z: Complex64) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| segment_distance(z, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub fn diameter(poly: &[Complex64]) -> f64 {
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for z in poly {
        lo.re = lo.re.min(z.re);
        lo.im = lo.im.min(z.im);
        hi.re = hi.re.max(z.re);
        hi.im = hi.im.max(z.im);
    }
    (hi - lo).norm()
}

/// Whether `z` is enclosed once by `poly`; points within the boundary band
/// are an error rather than a guess.
pub fn encloses(poly: &[Complex64], z: Complex64) -> Result<bool> {
    let band = BOUNDARY_BAND * diameter(poly);
    if distance_to_polyline(poly, z) <= band {
        return Err(Error::OnBoundary { re: z.re, im: z.im });
    }
    Ok(winding_number(poly, z) == 1)
}

/// `inner` lies in the interior of `outer` at positive distance.
pub fn compactly_inside(inner: &[Complex64], outer: &[Complex64]) -> bool {
    let band = BOUNDARY_BAND * diameter(outer);
    inner
        .iter()
        .all(|&z| winding_number(outer, z) == 1 && distance_to_polyline(outer, z) > band)
}

/// Largest distance from a sample of `a` to the polyline `b`.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|&z| distance_to_polyline(b, z))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Complex64> {
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
        ]
    }

    #[test]
    fn winding_of_square() {
        let s = square();
        assert_eq!(winding_number(&s, Complex64::new(0.5, 0.5)), 1);
        assert_eq!(winding_number(&s, Complex64::new(1.5, 0.5)), 0);
        let mut r = s.clone();
        r.reverse();
        assert_eq!(winding_number(&r, Complex64::new(0.5, 0.5)), -1);
        assert!(encloses(&s, Complex64::new(0.5, 0.5)).unwrap());
        assert!(matches!(
            encloses(&s, Complex64::new(1.0, 0.5)),
            Err(Error::OnBoundary { .. })
        ));
    }

    #[test]
    fn nested_squares() {
        let s = square();
        let small: Vec<Complex64> = s.iter().map(|z| z * 0.5 + Complex64::new(0.25, 0.25)).collect();
        assert!(compactly_inside(&small, &s));
        assert!(!compactly_inside(&s, &small));
        assert!((directed_hausdorff(&small, &s) - 0.25).abs() < 1e-12);
    }
}
