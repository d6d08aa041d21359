//! External rays by Newton continuation in Böttcher coordinates.
//!
//! A point of potential `G` on the ray of angle `t` solves
//! `f^n(z) = exp(2^n (G + 2 pi i t))` once `2^n G` is large enough that the
//! Böttcher map is the identity to working precision. Levels descend on the
//! ladder `G_k = G_top 2^{-k/s}`, `k` an integer, so that `f` maps the
//! sample of index `k` on ray `t` to the sample of index `k - s` on ray `2t`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::precision::{DdComplex, Precision, Scalar};
use super::QuadraticMap;
use crate::angles::Angle;
use crate::error::{Error, Result};

/// `log R` for the reference circle where the Böttcher map is taken to be
/// the identity.
const LOG_REFERENCE_RADIUS: f64 = 20.0;
/// Rays start at the first ladder level at or above this potential.
const START_POTENTIAL: f64 = 7.0;
const MAX_NEWTON_ITERATIONS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    /// Sub-steps per halving of the potential.
    pub substeps: usize,
    pub newton_tol: f64,
    pub landing_tol: f64,
    /// Potential of the depth-0 equipotential; piece truncation level `l`
    /// sits at `top_level / 2^l`.
    pub top_level: f64,
    pub max_dyadic_levels: usize,
    pub precision: Precision,
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams {
            substeps: 4,
            newton_tol: 1e-12,
            landing_tol: 1e-8,
            top_level: 2.0,
            max_dyadic_levels: 600,
            precision: Precision::Double,
        }
    }
}

impl TraceParams {
    /// Hash of everything that influences sample positions.
    pub fn schedule_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("params serialize"));
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Potential at ladder index `k`.
    pub fn level(&self, k: i64) -> f64 {
        self.top_level * (-(k as f64) / self.substeps as f64).exp2()
    }

    /// Ladder index of truncation level `l`.
    pub fn index_of_truncation(&self, l: usize) -> i64 {
        (l * self.substeps) as i64
    }

    fn start_index(&self) -> i64 {
        let mut j = 0i64;
        while self.top_level * (j as f64).exp2() < START_POTENTIAL {
            j += 1;
        }
        -j * self.substeps as i64
    }

    /// Number of iterates `n` used at ladder index `k` and the value
    /// `2^n G_k`.
    fn iterates_at(&self, k: i64) -> (usize, f64) {
        let s = self.substeps as f64;
        let mut n = 0usize;
        loop {
            let v = self.top_level * (n as f64 - k as f64 / s).exp2();
            if v >= LOG_REFERENCE_RADIUS {
                return (n, v);
            }
            n += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayStatus {
    Landed,
    Truncated,
    EscapedPrecision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayTrace {
    pub angle: Angle,
    /// Ladder index of `points[0]`.
    pub first_index: i64,
    pub points: Vec<Complex64>,
    pub levels: Vec<f64>,
    pub landing: Option<Complex64>,
    pub status: RayStatus,
}

impl RayTrace {
    pub fn point_at_index(&self, k: i64) -> Option<Complex64> {
        let i = k - self.first_index;
        if i < 0 {
            return None;
        }
        self.points.get(i as usize).copied()
    }

    /// Samples from ladder index `k` downward, closed off by the landing
    /// point when there is one.
    pub fn tail_from(&self, k: i64) -> Vec<Complex64> {
        let i = (k - self.first_index).max(0) as usize;
        let mut v: Vec<Complex64> = self.points.get(i..).unwrap_or(&[]).to_vec();
        if let Some(l) = self.landing {
            v.push(l);
        }
        v
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.points.len() as i64 - 1
    }
}

/// Preperiod and period of a rational angle under doubling.
pub fn preperiod_and_period(angle: &Angle) -> (usize, usize) {
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut a = angle.clone();
    let mut i = 0;
    loop {
        if let Some(&j) = seen.get(&a) {
            return (j, i - j);
        }
        seen.insert(a.clone(), i);
        a = a.doubling();
        i += 1;
    }
}

/// Solves `f^n(z) = w` by Newton's method. Returns `None` on divergence.
fn newton_invert<S: Scalar>(
    map: &QuadraticMap,
    n: usize,
    w: Complex64,
    z0: Complex64,
    tol: f64,
) -> Option<Complex64> {
    let c = S::from_c64(map.c);
    let wd = S::from_c64(w);
    let mut z = S::from_c64(z0);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let mut zn = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            d = 2.0 * zn.to_c64() * d;
            zn = zn.sqr() + c;
        }
        let step = (zn - wd).to_c64() / d;
        if !step.is_finite() {
            return None;
        }
        z = z - S::from_c64(step);
        let zf = z.to_c64();
        if step.norm() <= tol * zf.norm().max(1.0) {
            return Some(zf);
        }
    }
    None
}

/// Point of potential `2^{-n} log_w` and angle `angle_n / 2^n`, refined
/// from `z0`; `angle_n` is the exact image angle `2^n t mod 1`.
pub(crate) fn boettcher_point(
    map: &QuadraticMap,
    params: &TraceParams,
    n: usize,
    log_w: f64,
    angle_n: f64,
    z0: Complex64,
) -> Option<Complex64> {
    let w = Complex64::from_polar(log_w.exp(), TAU * angle_n);
    match params.precision {
        Precision::Double => newton_invert::<Complex64>(map, n, w, z0, params.newton_tol),
        Precision::Extended => newton_invert::<DdComplex>(map, n, w, z0, params.newton_tol),
    }
}

/// Exact images `2^j t mod 1` as doubles, for `j = 0..=len`.
fn angle_orbit(angle: &Angle, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut a = angle.clone();
    for _ in 0..=len {
        out.push(a.to_f64());
        a = a.doubling();
    }
    out
}

struct Descent<'a> {
    map: &'a QuadraticMap,
    params: &'a TraceParams,
    orbit: Vec<f64>,
    k: i64,
    z: Complex64,
    trace: RayTrace,
}

impl<'a> Descent<'a> {
    fn start(map: &'a QuadraticMap, params: &'a TraceParams, angle: &Angle) -> Self {
        let k0 = params.start_index();
        let (n_max, _) = params.iterates_at(k0 + (params.max_dyadic_levels * params.substeps) as i64);
        let orbit = angle_orbit(angle, n_max + 1);
        let g0 = params.level(k0);
        let z = Complex64::from_polar(g0.exp(), TAU * orbit[0]);
        Descent {
            map,
            params,
            orbit,
            k: k0,
            z,
            trace: RayTrace {
                angle: angle.clone(),
                first_index: k0,
                points: Vec::new(),
                levels: Vec::new(),
                landing: None,
                status: RayStatus::Truncated,
            },
        }
    }

    /// Refines the sample at the current index; false on Newton failure.
    fn step(&mut self) -> bool {
        let (n, log_w) = self.params.iterates_at(self.k);
        match boettcher_point(self.map, self.params, n, log_w, self.orbit[n], self.z) {
            Some(z) => {
                self.z = z;
                self.trace.points.push(z);
                self.trace.levels.push(self.params.level(self.k));
                self.k += 1;
                true
            }
            None => {
                self.trace.status = RayStatus::EscapedPrecision;
                false
            }
        }
    }

    fn max_index(&self) -> i64 {
        (self.params.max_dyadic_levels * self.params.substeps) as i64
    }
}

/// Samples of the ray of `angle` from the start level down to `target_level`.
pub fn trace_ray(
    map: &QuadraticMap,
    params: &TraceParams,
    angle: &Angle,
    target_level: f64,
) -> Result<RayTrace> {
    if !(target_level > 0.0) {
        return Err(Error::Argument(format!(
            "target level must be positive, got {target_level}"
        )));
    }
    let mut d = Descent::start(map, params, angle);
    while d.k <= d.max_index() {
        if !d.step() {
            return Ok(d.trace);
        }
        if *d.trace.levels.last().unwrap() <= target_level {
            return Ok(d.trace);
        }
    }
    Ok(d.trace)
}

/// Traces the ray of `angle` until it lands: the deepest five samples lie
/// within the landing tolerance of the landing point and approach it
/// monotonically. The landing point is refined as the solution of
/// `f^{m+p}(z) = f^m(z)` for the preperiod `m` and period `p` of the angle.
pub fn trace_to_landing(
    map: &QuadraticMap,
    params: &TraceParams,
    angle: &Angle,
) -> RayTrace {
    let (m, p) = preperiod_and_period(angle);
    let mut d = Descent::start(map, params, angle);
    let s = params.substeps as i64;
    while d.k <= d.max_index() {
        if !d.step() {
            return d.trace;
        }
        let count = d.trace.points.len();
        if count < 5 || (d.k % s != 0 && count > 5) {
            continue;
        }
        let Some(v) = map.refine_preperiodic(d.z, m, p) else {
            continue;
        };
        let tail = &d.trace.points[count - 5..];
        let dist: Vec<f64> = tail.iter().map(|z| (z - v).norm()).collect();
        let close = dist.iter().all(|&r| r <= params.landing_tol);
        let monotone = dist.windows(2).all(|w| w[1] <= w[0]);
        if close && monotone {
            d.trace.landing = Some(v);
            d.trace.status = RayStatus::Landed;
            return d.trace;
        }
    }
    d.trace
}

/// Traces rays and memoizes them by angle. Shared between threads.
pub struct Tracer {
    pub map: QuadraticMap,
    pub params: TraceParams,
    landed: RwLock<HashMap<Angle, Arc<RayTrace>>>,
}

impl Tracer {
    pub fn new(map: QuadraticMap, params: TraceParams) -> Self {
        Tracer {
            map,
            params,
            landed: RwLock::new(HashMap::new()),
        }
    }

    /// Landed trace of `angle`, or a landing error naming the angle.
    pub fn landed_ray(&self, angle: &Angle) -> Result<Arc<RayTrace>> {
        if let Some(r) = self.landed.read().unwrap().get(angle) {
            return Ok(r.clone());
        }
        let trace = trace_to_landing(&self.map, &self.params, angle);
        if trace.status != RayStatus::Landed {
            return Err(Error::Landing {
                angle: angle.clone(),
                reason: format!(
                    "status {:?} after {} samples",
                    trace.status,
                    trace.points.len()
                ),
            });
        }
        let trace = Arc::new(trace);
        self.landed
            .write()
            .unwrap()
            .entry(angle.clone())
            .or_insert_with(|| trace.clone());
        Ok(trace)
    }

    pub fn insert(&self, trace: RayTrace) {
        self.landed
            .write()
            .unwrap()
            .insert(trace.angle.clone(), Arc::new(trace));
    }

    pub fn cached(&self) -> Vec<Arc<RayTrace>> {
        let mut v: Vec<_> = self.landed.read().unwrap().values().cloned().collect();
        v.sort_by(|a, b| a.angle.cmp(&b.angle));
        v
    }

    /// Point of Böttcher coordinates `(level index k, angle)`, continued
    /// from `z0`.
    pub fn point(&self, k: i64, angle: &Angle, z0: Complex64) -> Option<Complex64> {
        let (n, log_w) = self.params.iterates_at(k);
        let a = angle.doubling_n(n).to_f64();
        boettcher_point(&self.map, &self.params, n, log_w, a, z0)
    }
}
