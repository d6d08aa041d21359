use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ray::{trace_to_landing, RayStatus, TraceParams};
use super::QuadraticMap;
use crate::angles::{alpha_cycle, AngleCycle};
use crate::error::{Error, Result};

/// Distance below which a landing point is identified with `alpha`.
pub const ALPHA_MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RotationDetection {
    Found { p: u32, q: u32, cycle: AngleCycle },
    Undetermined { reason: String },
}

impl RotationDetection {
    pub fn cycle(&self) -> Option<&AngleCycle> {
        match self {
            RotationDetection::Found { cycle, .. } => Some(cycle),
            RotationDetection::Undetermined { .. } => None,
        }
    }

    pub fn into_cycle(self) -> Result<AngleCycle> {
        match self {
            RotationDetection::Found { cycle, .. } => Ok(cycle),
            RotationDetection::Undetermined { reason } => Err(Error::Precondition(format!(
                "rotation number undetermined: {reason}"
            ))),
        }
    }
}

fn lands_at_alpha(map: &QuadraticMap, params: &TraceParams, cycle: &AngleCycle) -> bool {
    cycle.angles.iter().all(|a| {
        let r = trace_to_landing(map, params, a);
        r.status == RayStatus::Landed
            && (r.landing.unwrap() - map.alpha).norm() <= ALPHA_MATCH_TOL
    })
}

/// Finds the rotation number `p/q`, `q <= q_max`, of the rays landing at
/// `alpha` by tracing every candidate cycle.
pub fn detect_rotation_number(
    map: &QuadraticMap,
    params: &TraceParams,
    q_max: u32,
) -> Result<RotationDetection> {
    if q_max < 2 {
        return Err(Error::Argument(format!("q_max must be at least 2, got {q_max}")));
    }
    if !map.alpha_is_repelling() {
        return Ok(RotationDetection::Undetermined {
            reason: format!(
                "alpha is not repelling (|multiplier| = {:.6})",
                map.alpha_multiplier().norm()
            ),
        });
    }
    if super::critical_orbit(map, super::GREEN_BUDGET).escaped {
        return Ok(RotationDetection::Undetermined {
            reason: "critical orbit escapes; the Julia set is disconnected".into(),
        });
    }
    let mut hits = Vec::new();
    for q in 2..=q_max {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let cycle = alpha_cycle(p, q)?;
            if lands_at_alpha(map, params, &cycle) {
                hits.push(cycle);
            }
        }
    }
    match hits.len() {
        1 => {
            let cycle = hits.pop().unwrap();
            let (p, q) = cycle.rotation;
            Ok(RotationDetection::Found { p, q, cycle })
        }
        0 => Ok(RotationDetection::Undetermined {
            reason: format!("no cycle with q <= {q_max} lands at alpha"),
        }),
        n => Err(Error::Internal(format!(
            "{n} distinct cycles land at alpha; tracing tolerance too coarse"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn basilica_is_one_half() {
        let m = QuadraticMap::real(-1.0);
        let d = detect_rotation_number(&m, &TraceParams::default(), 4).unwrap();
        match d {
            RotationDetection::Found { p, q, cycle } => {
                assert_eq!((p, q), (1, 2));
                assert_eq!(cycle.angles, alpha_cycle(1, 2).unwrap().angles);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rabbit_is_one_third() {
        let m = QuadraticMap::new(Complex64::new(-0.122561166877, 0.744861766620));
        let d = detect_rotation_number(&m, &TraceParams::default(), 4).unwrap();
        assert_eq!(d.cycle().unwrap().rotation, (1, 3));
    }

    #[test]
    fn attracting_alpha_is_undetermined() {
        let m = QuadraticMap::real(0.25 + 1e-3);
        let d = detect_rotation_number(&m, &TraceParams::default(), 4).unwrap();
        assert!(matches!(d, RotationDetection::Undetermined { .. }));
        let m = QuadraticMap::real(0.1);
        assert!(detect_rotation_number(&m, &TraceParams::default(), 4)
            .unwrap()
            .cycle()
            .is_none());
    }
}
