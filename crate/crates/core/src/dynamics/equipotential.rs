//! Level sets of the Green's function, parametrized by Böttcher angle.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ray::{boettcher_point, TraceParams};
use super::QuadraticMap;
use crate::angles::Angle;
use crate::error::{Error, Result};

/// Continuation sub-steps per turn of the reference circle.
const STEPS_PER_TURN_LOG2: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equipotential {
    pub level: f64,
    /// Closed polyline; sample `j` has Böttcher angle `j / samples.len()`.
    pub samples: Vec<Complex64>,
}

fn iterates_for(level: f64) -> (usize, f64) {
    let mut n = 0;
    while level * (n as f64).exp2() < 20.0 {
        n += 1;
    }
    (n, level * (n as f64).exp2())
}

/// Point of potential `level` on the ray of angle `angle`, reached by
/// descending along the ray from a high potential.
pub fn point_on_level(
    map: &QuadraticMap,
    params: &TraceParams,
    level: f64,
    angle: &Angle,
) -> Option<Complex64> {
    let ratio = (1.0 / params.substeps as f64).exp2();
    let mut g = level.max(7.0);
    let mut z = Complex64::from_polar(g.exp(), std::f64::consts::TAU * angle.to_f64());
    loop {
        let (n, log_w) = iterates_for(g);
        z = boettcher_point(map, params, n, log_w, angle.doubling_n(n).to_f64(), z)?;
        if g <= level {
            return Some(z);
        }
        g = (g / ratio).max(level);
    }
}

/// Samples of the level set from `start` counterclockwise to `end` (exact
/// angles), continuing from `z_start`, the point at `start`. Interior samples
/// sit at the dyadic angles `j / 2^N` with `2^N` about sixteen per turn of the
/// reference circle, so arcs shared by two pieces are sampled identically.
pub fn arc_points(
    map: &QuadraticMap,
    params: &TraceParams,
    level: f64,
    start: &Angle,
    end: &Angle,
    z_start: Complex64,
) -> Option<Vec<Complex64>> {
    let (n, log_w) = iterates_for(level);
    let bits = n + STEPS_PER_TURN_LOG2;
    let den = BigUint::from(1u32) << bits;
    let span = start.ccw_to(end);
    let mut pts = vec![z_start];
    let mut z = z_start;
    // First dyadic angle strictly after `start`.
    let den_i = BigInt::from(den);
    let scaled: BigRational = start.as_rational() * &den_i;
    let mut j: BigInt = scaled.floor().to_integer() + 1;
    loop {
        let a = Angle::from_rational(BigRational::new(j.clone(), den_i.clone()));
        if start.ccw_to(&a) >= span || a == *start {
            break;
        }
        z = boettcher_point(map, params, n, log_w, a.doubling_n(n).to_f64(), z)?;
        pts.push(z);
        j += 1;
    }
    if end != start || pts.len() == 1 {
        z = boettcher_point(map, params, n, log_w, end.doubling_n(n).to_f64(), z)?;
        pts.push(z);
    }
    Some(pts)
}

/// The closed level set `G = level` sampled at `samples` equally spaced
/// Böttcher angles.
pub fn equipotential(
    map: &QuadraticMap,
    params: &TraceParams,
    level: f64,
    samples: usize,
) -> Result<Equipotential> {
    if !(level > 0.0) || samples < 16 {
        return Err(Error::Argument(format!(
            "equipotential needs level > 0 and at least 16 samples (got {level}, {samples})"
        )));
    }
    let (n, log_w) = iterates_for(level);
    let sub = ((1usize << (n + STEPS_PER_TURN_LOG2)) / samples).max(1);
    let total = samples * sub;
    let mut z = point_on_level(map, params, level, &Angle::zero())
        .ok_or_else(|| Error::Numeric("equipotential start point diverged".into()))?;
    let mut out = Vec::with_capacity(samples);
    for i in 0..total {
        if i > 0 {
            let a = Angle::new(i as u64, total as u64);
            z = boettcher_point(map, params, n, log_w, a.doubling_n(n).to_f64(), z)
                .ok_or_else(|| Error::Numeric(format!("equipotential diverged at {a}")))?;
        }
        if i % sub == 0 {
            out.push(z);
        }
    }
    Ok(Equipotential {
        level,
        samples: out,
    })
}

/// Winding number of a closed polyline around `z`.
pub fn winding_number(poly: &[Complex64], z: Complex64) -> i64 {
    let mut total = 0.0;
    for i in 0..poly.len() {
        let a = poly[i] - z;
        let b = poly[(i + 1) % poly.len()] - z;
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}
