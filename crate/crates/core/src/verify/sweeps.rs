//! Fixture sweeps for the appendix laws: each row pairs a computed modulus
//! with its reference value and a verdict.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::forms::{check_covering_form, check_qal_form};
use crate::config::RunConfig;
use crate::error::Result;
use crate::modulus::fixtures::{
    strip_modulus, Cylinder, EccentricAnnulus, Islands, PowerPreimage, Rectangle, Strip, Target,
};
use crate::modulus::laws::{check_cylinder_bound, check_groetzsch16, check_pi_bounds, InequalityVerdict};
use crate::modulus::{
    annulus_modulus, parallel_law, quad_modulus, series_law, Combine, GridDomain, GridParams, Mode, Modulus,
};

pub const SWEEP_SCHEMA: &str = "yoccoz.sweep.v1";

pub const PI_RATIOS: [f64; 6] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub case: String,
    pub computed: Modulus,
    /// Closed-form or combinator prediction, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    pub verdict: InequalityVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub check: String,
    pub rows: Vec<SweepRow>,
    pub violations: usize,
}

impl Sweep {
    fn new(check: &str, rows: Vec<SweepRow>) -> Self {
        let violations = rows.iter().filter(|r| !r.verdict.passed()).count();
        Sweep {
            check: check.into(),
            rows,
            violations,
        }
    }
}

/// Names accepted by [`run_check`].
pub const CHECKS: [&str; 8] = [
    "pi-bounds",
    "cylinder",
    "groetzsch",
    "degree-n",
    "series",
    "parallel",
    "qal",
    "covering",
];

pub fn run_check(name: &str, config: &RunConfig) -> Result<Sweep> {
    let g = &config.grid;
    match name {
        "pi-bounds" => pi_bounds_sweep(&PI_RATIOS, g),
        "cylinder" => cylinder_sweep(&[(0.2, 1.0), (0.5, 1.0), (1.0, 1.0)], g),
        "groetzsch" => groetzsch_fixture(g),
        "degree-n" => degree_n_sweep(&[2, 3, 4], g),
        "series" => series_sweep(&[(0.2, 0.3), (0.5, 0.5), (1.0, 0.25)], g),
        "parallel" => parallel_sweep(&[(1.0, 1.0), (0.5, 1.5), (2.0, 1.0)], g),
        "qal" => qal_fixture(g, config),
        "covering" => covering_fixture(g, config),
        other => Err(crate::error::Error::Argument(format!(
            "unknown check {other:?}; expected one of {}",
            CHECKS.join(", ")
        ))),
    }
}

/// Truncated strips of height `h` over the unit base.
pub fn pi_bounds_sweep(ratios: &[f64], g: &GridParams) -> Result<Sweep> {
    let rows = ratios
        .par_iter()
        .map(|&t| {
            let m = strip_modulus(&Strip::new(t, 1.0), g)?;
            Ok(SweepRow {
                case: format!("h/a = {t}"),
                computed: m,
                reference: None,
                verdict: check_pi_bounds(t, 1.0, m),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep::new("pi-bounds", rows))
}

/// The cylinder of height `h` and circumference `l` covered by the strip
/// of height `h` over a base of length `l`.
pub fn cylinder_sweep(cases: &[(f64, f64)], g: &GridParams) -> Result<Sweep> {
    let rows = cases
        .par_iter()
        .map(|&(h, l)| {
            let cyl = Cylinder { h, l };
            let mc = annulus_modulus(&cyl, g)?;
            let ms = strip_modulus(&Strip::new(h, l), g)?;
            Ok(SweepRow {
                case: format!("h = {h}, l = {l}"),
                computed: ms,
                reference: Some(cyl.exact()),
                verdict: check_cylinder_bound(ms, mc),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep::new("cylinder", rows))
}

fn square_target() -> Target {
    Target {
        c0: Complex64::new(0.15, 0.1),
        r1: 0.4,
        r2: 1.0,
        square: true,
    }
}

/// Embedded annulus between a disk and a square, and the holomorphic
/// annulus over it given by its `z^2` preimage.
pub fn groetzsch_fixture(g: &GridParams) -> Result<Sweep> {
    let t = square_target();
    let embedded = annulus_modulus(
        &move |longest: usize| {
            let w = t.r2 * (1.0 + 2.0 / longest as f64);
            GridDomain::cartesian((-w, w), (-w, w), longest, false, Mode::Annulus, move |z| t.classify(z))
        },
        g,
    )?;
    let hol = annulus_modulus(&PowerPreimage { n: 2, target: t }, g)?;
    let row = SweepRow {
        case: "z^2 preimage of a disk inside a square".into(),
        computed: hol,
        reference: Some(embedded.value / 2.0),
        verdict: check_groetzsch16(hol, embedded),
    };
    Ok(Sweep::new("groetzsch", vec![row]))
}

/// `z^N` preimages of an eccentric round annulus: the modulus divides by
/// `N`.
pub fn degree_n_sweep(ns: &[u32], g: &GridParams) -> Result<Sweep> {
    let t = Target {
        c0: Complex64::new(0.1, 0.05),
        r1: 0.3,
        r2: 1.0,
        square: false,
    };
    let image = t.exact().unwrap();
    let rows = ns
        .par_iter()
        .map(|&n| {
            let m = annulus_modulus(&PowerPreimage { n, target: t }, g)?;
            let expected = Modulus::exact(image / f64::from(n));
            Ok(SweepRow {
                case: format!("N = {n}"),
                computed: m,
                reference: Some(expected.value),
                verdict: InequalityVerdict::approx(&format!("degree {n} preimage"), m, expected, 0.02),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep::new("degree-n", rows))
}

/// Unit-width rectangles of heights `h1` and `h2` stacked into one.
pub fn series_sweep(cases: &[(f64, f64)], g: &GridParams) -> Result<Sweep> {
    let rows = cases
        .par_iter()
        .map(|&(h1, h2)| {
            let whole = quad_modulus(&Rectangle { a: 1.0, h: h1 + h2, swapped: false }, g)?;
            let parts = [h1, h2]
                .iter()
                .map(|&h| quad_modulus(&Rectangle { a: 1.0, h, swapped: false }, g))
                .collect::<Result<Vec<_>>>()?;
            let predicted = series_law(&parts);
            Ok(SweepRow {
                case: format!("h = {h1} + {h2}"),
                computed: whole,
                reference: Some(predicted.value),
                verdict: InequalityVerdict::approx("series law", whole, predicted, 0.02),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep::new("series", rows))
}

/// Unit-height rectangles of widths `a1` and `a2` side by side.
pub fn parallel_sweep(cases: &[(f64, f64)], g: &GridParams) -> Result<Sweep> {
    let rows = cases
        .par_iter()
        .map(|&(a1, a2)| {
            let whole = quad_modulus(&Rectangle { a: a1 + a2, h: 1.0, swapped: false }, g)?;
            let parts = [a1, a2]
                .iter()
                .map(|&a| quad_modulus(&Rectangle { a, h: 1.0, swapped: false }, g))
                .collect::<Result<Vec<_>>>()?;
            let predicted = parallel_law(&parts, Combine::Length);
            Ok(SweepRow {
                case: format!("a = {a1} + {a2}"),
                computed: whole,
                reference: Some(predicted.value),
                verdict: InequalityVerdict::approx("parallel law", whole, predicted, 0.02),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep::new("parallel", rows))
}

/// Two round islands of radius 0.2 at distance 0.5 from the centre of the
/// unit disk.
pub fn qal_fixture(g: &GridParams, config: &RunConfig) -> Result<Sweep> {
    let fixture = Islands::symmetric(2, 0.5, 0.2, 1.0);
    let m = fixture.islands.len();
    let container = annulus_modulus(&fixture, g)?;
    let islands: Vec<Modulus> = (0..m).map(|i| Modulus::exact(fixture.island_modulus(i))).collect();
    let collars: Vec<Modulus> = (0..m).map(|i| Modulus::exact(fixture.collar_modulus(i))).collect();
    let verdict = check_qal_form(container, &islands, &collars, config.eta, m, config.delta0);
    let row = SweepRow {
        case: "two round islands".into(),
        computed: container,
        reference: None,
        verdict,
    };
    Ok(Sweep::new("qal", vec![row]))
}

/// `f(z) = z^2` from `U = f^{-1}(V)` onto the unit disk `V`, with `B` an
/// off-centre disk around the critical value and `A = f^{-1}(B)`; the
/// collar `B'` is the concentric disk reaching the unit circle.
pub fn covering_fixture(g: &GridParams, config: &RunConfig) -> Result<Sweep> {
    let t = Target {
        c0: Complex64::new(0.1, 0.0),
        r1: 0.3,
        r2: 1.0,
        square: false,
    };
    let mod_ua = annulus_modulus(&PowerPreimage { n: 2, target: t }, g)?;
    let mod_vb = annulus_modulus(&EccentricAnnulus { d: t.c0, r1: t.r1, r2: t.r2 }, g)?;
    let r_collar = t.r2 - t.c0.norm();
    let collar = Modulus::exact((r_collar / t.r1).ln() / std::f64::consts::TAU);
    let verdict = check_covering_form(mod_ua, mod_vb, collar, config.eta, 2, config.epsilon);
    let row = SweepRow {
        case: "z^2 cover of an eccentric annulus".into(),
        computed: mod_vb,
        reference: t.exact(),
        verdict,
    };
    Ok(Sweep::new("covering", vec![row]))
}
