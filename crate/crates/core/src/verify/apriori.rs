//! A-priori bounds along a renormalization chain. Each renormalizable
//! level contributes `mod(E^{chi-1} \ E^chi)`; the next level is the real
//! parameter whose map straightens the return map `f^p` near 0.

use num_complex::Complex64;
use serde::Serialize;

use super::{analyze, nest_annulus, top_modulus_r};
use crate::config::RunConfig;
use crate::error::Result;
use crate::modulus::Modulus;
use crate::nest::RenormStatus;
use crate::presets::straighten_real;

pub const APRIORI_SCHEMA: &str = "yoccoz.apriori.v1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AprioriLevel {
    pub level: usize,
    pub parameter: [f64; 2],
    pub depths: Vec<usize>,
    pub chi: usize,
    /// Renormalization period `p`.
    pub period: usize,
    pub modulus: Modulus,
    pub above_floor: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AprioriReport {
    pub parameter: [f64; 2],
    /// `min(mod(Y0 \ R), 1/2)` at the first level.
    pub mu: Modulus,
    pub floor: f64,
    pub levels: Vec<AprioriLevel>,
    pub requested: usize,
    /// Why the chain stopped early.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
    /// Every computed level has its modulus above the floor.
    pub floor_met: bool,
    pub notes: Vec<String>,
}

/// Walks `levels` renormalization levels from `c`.
pub fn apriori_report(c: Complex64, levels: usize, config: &RunConfig) -> Result<AprioriReport> {
    let mut report = AprioriReport {
        parameter: [c.re, c.im],
        mu: Modulus::exact(0.5),
        floor: config.floor,
        levels: Vec::new(),
        requested: levels,
        truncated: None,
        floor_met: false,
        notes: vec![
            "moduli are geometric stand-ins for pseudo-moduli".into(),
            "levels after the first use the straightened real parameter".into(),
        ],
    };
    let mut c = c;
    for level in 1..=levels {
        let a = analyze(c, config)?;
        if level == 1 {
            let top = top_modulus_r(&a.puzzle, &config.grid)?.modulus;
            if top.value < 0.5 {
                report.mu = top;
            }
        }
        let (Some(chi), Some(p)) = (a.nest.chi, a.nest.period) else {
            report.truncated = Some(match a.nest.status {
                RenormStatus::Renormalizable => "renormalization data missing".into(),
                s => format!("level {level} is not renormalizable ({s:?})"),
            });
            break;
        };
        let modulus = nest_annulus(&a.puzzle, &a.nest, chi, &config.grid)?.modulus;
        report.levels.push(AprioriLevel {
            level,
            parameter: [c.re, c.im],
            depths: a.nest.depths(),
            chi,
            period: p,
            modulus,
            above_floor: modulus.lo() > config.floor,
        });
        if level == levels {
            break;
        }
        let Some(period) = a.puzzle.period else {
            report.truncated = Some(format!("level {level}: critical orbit is not periodic"));
            break;
        };
        if c.im != 0.0 {
            report.truncated = Some(format!("level {level}: straightening needs a real parameter"));
            break;
        }
        if period == p {
            report.truncated = Some(format!("level {level}: renormalization is the whole orbit"));
            break;
        }
        c = Complex64::new(straighten_real(c.re, period, p)?, 0.0);
    }
    report.floor_met = !report.levels.is_empty() && report.levels.iter().all(|l| l.above_floor);
    Ok(report)
}
