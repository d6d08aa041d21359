//! Named parameters. Real superstable ones are located by bisection on the
//! sign of `f_c^P(0)` inside a stored bracket.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the parameter of a preset is obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum Location {
    /// Bisection on `f_c^period(0)` between `lo` and `hi`.
    Bisection { period: usize, lo: f64, hi: f64 },
    /// Fixed complex value.
    Fixed { re: f64, im: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    /// Twelve significant digits.
    pub c: String,
    pub location: Location,
    pub note: String,
    /// Expected rotation denominator and escape time, `n = None` for
    /// satellite parameters.
    pub expected_q: Option<usize>,
    pub expected_n: Option<usize>,
    pub expected_period: Option<usize>,
}

impl Preset {
    /// The parameter, recomputed from its location recipe.
    pub fn parameter(&self) -> Result<Complex64> {
        match self.location {
            Location::Bisection { period, lo, hi } => {
                Ok(Complex64::new(real_superstable(period, lo, hi)?, 0.0))
            }
            Location::Fixed { re, im } => Ok(Complex64::new(re, im)),
        }
    }

    pub fn real_parameter(&self) -> Option<f64> {
        match self.location {
            Location::Bisection { .. } => self.parameter().ok().map(|c| c.re),
            Location::Fixed { re, im } if im == 0.0 => Some(re),
            Location::Fixed { .. } => None,
        }
    }
}

/// `f_c^period(0)` for real `c`.
pub fn critical_iterate(c: f64, period: usize) -> f64 {
    let mut x = 0.0;
    for _ in 0..period {
        x = x * x + c;
    }
    x
}

/// Root of `c -> f_c^period(0)` in `[lo, hi]` by bisection to machine
/// precision; the ends must have opposite signs.
pub fn real_superstable(period: usize, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let sa = critical_iterate(a, period) > 0.0;
    if sa == (critical_iterate(b, period) > 0.0) {
        return Err(Error::Argument(format!(
            "f^{period}(0) has the same sign at {a} and {b}"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (critical_iterate(m, period) > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Superstable parameters of exact period `period` in `[lo, hi]`, found by
/// sign changes on a grid of `samples` cells.
pub fn superstable_parameters(period: usize, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev = (lo, critical_iterate(lo, period));
    for k in 1..=samples {
        let c = lo + (hi - lo) * k as f64 / samples as f64;
        let v = critical_iterate(c, period);
        if (v > 0.0) != (prev.1 > 0.0) {
            if let Ok(r) = real_superstable(period, prev.0, c) {
                if exact_period(r, period) == Some(period) {
                    out.push(r);
                }
            }
        }
        prev = (c, v);
    }
    out
}

fn exact_period(c: f64, max: usize) -> Option<usize> {
    let mut x = 0.0f64;
    for j in 1..=max {
        x = x * x + c;
        if x.abs() < 1e-7 {
            return Some(j);
        }
    }
    None
}

/// Signs of `f^j(0)`, `j = 1..period-1`: `true` for positive.
pub fn kneading(c: f64, period: usize) -> Vec<bool> {
    let mut x = 0.0;
    (1..period)
        .map(|_| {
            x = x * x + c;
            x > 0.0
        })
        .collect()
}

/// Real superstable parameter of period `period / p` whose map is the
/// straightening of `f^p` near 0: same kneading once the orientation of the
/// return map is normalized to a minimum at 0.
pub fn straighten_real(c: f64, period: usize, p: usize) -> Result<f64> {
    if p == 0 || period % p != 0 || period == p {
        return Err(Error::Argument(format!(
            "cannot renormalize period {period} with return time {p}"
        )));
    }
    let inner = period / p;
    let orbit: Vec<f64> = {
        let mut x = 0.0;
        (0..period)
            .map(|_| {
                let y = x;
                x = x * x + c;
                y
            })
            .collect()
    };
    // (f^p)''(0) has the sign of f(0) f^2(0) ... f^{p-1}(0).
    let flip = orbit[1..p].iter().filter(|x| **x < 0.0).count() % 2 == 1;
    let target: Vec<bool> = (1..inner).map(|j| (orbit[j * p] > 0.0) != flip).collect();
    let candidates = superstable_parameters(inner, -2.0, -0.75, 1 << 16);
    let hits: Vec<f64> = candidates
        .into_iter()
        .filter(|&r| kneading(r, inner) == target)
        .collect();
    match hits.as_slice() {
        [r] => Ok(*r),
        [] if inner <= 2 => Ok(if inner == 1 { 0.0 } else { -1.0 }),
        _ => Err(Error::Numeric(format!(
            "{} real parameters of period {inner} match the renormalized kneading",
            hits.len()
        ))),
    }
}

fn real(name: &str, c: &str, period: usize, lo: f64, hi: f64, note: &str, n: Option<usize>) -> Preset {
    Preset {
        name: name.into(),
        c: c.into(),
        location: Location::Bisection { period, lo, hi },
        note: note.into(),
        expected_q: Some(2),
        expected_n: n,
        expected_period: Some(period),
    }
}

/// All presets, in a fixed order.
pub fn presets() -> Vec<Preset> {
    let prim = "real superstable, primitive";
    vec![
        Preset {
            name: "basilica".into(),
            c: "-1".into(),
            location: Location::Fixed { re: -1.0, im: 0.0 },
            note: "period 2, satellite of the main cardioid".into(),
            expected_q: Some(2),
            expected_n: None,
            expected_period: Some(2),
        },
        Preset {
            name: "rabbit".into(),
            c: "-0.122561166877+0.744861766620i".into(),
            location: Location::Fixed {
                re: -0.122561166876654,
                im: 0.744861766619744,
            },
            note: "period 3 center of the 1/3 limb".into(),
            expected_q: Some(3),
            expected_n: None,
            expected_period: Some(3),
        },
        real("airplane", "-1.75487766625", 3, -1.754878, -1.754877, prim, Some(1)),
        real("p4-1", "-1.94079980653", 4, -1.940800, -1.940799, prim, Some(1)),
        real("p5-1", "-1.98542425305", 5, -1.985425, -1.985424, prim, Some(1)),
        real("p5-2", "-1.86078252220", 5, -1.860783, -1.860782, prim, Some(1)),
        real("p5-3", "-1.62541372512", 5, -1.625414, -1.625413, prim, Some(1)),
        real("p6-1", "-1.99637613771", 6, -1.996377, -1.996376, prim, Some(1)),
        real("p6-2", "-1.96677321639", 6, -1.966774, -1.966773, prim, Some(1)),
        real("p6-3", "-1.90728009107", 6, -1.907281, -1.907280, prim, Some(1)),
        real("p6-4", "-1.77289290338", 6, -1.772893, -1.772892, "real superstable, airplane tuned by the basilica", Some(1)),
        real("p7-1", "-1.99909568233", 7, -1.999096, -1.999095, prim, Some(1)),
        real("p7-2", "-1.99181417255", 7, -1.991815, -1.991814, prim, Some(1)),
        real("p7-3", "-1.97717958701", 7, -1.977180, -1.977179, prim, Some(1)),
        real("p7-4", "-1.95370589428", 7, -1.953706, -1.953705, prim, Some(1)),
        real("p7-5", "-1.92714770936", 7, -1.927148, -1.927147, prim, Some(1)),
        real("p7-6", "-1.88480357159", 7, -1.884804, -1.884803, prim, Some(1)),
        real("p7-7", "-1.83231520275", 7, -1.832316, -1.832315, prim, Some(1)),
        real("p7-8", "-1.67406609147", 7, -1.674067, -1.674066, prim, Some(1)),
        real("p7-9", "-1.57488913975", 7, -1.574890, -1.574889, prim, Some(1)),
        real("p8-1", "-1.81000138573", 8, -1.810002, -1.810001, prim, Some(1)),
        real("p8-2", "-1.71107947001", 8, -1.711080, -1.711079, prim, Some(1)),
        real("twice-tuned", "-1.78586564641", 9, -1.785866, -1.785865, "real superstable, airplane tuned by the airplane", Some(1)),
        real("p9-1", "-1.69014226312", 9, -1.690143, -1.690142, prim, Some(1)),
        real("p9-2", "-1.55528270077", 9, -1.555283, -1.555282, prim, Some(1)),
        real(
            "tripling3",
            "-1.78642985806",
            27,
            -1.786429862,
            -1.786429854,
            "real superstable, airplane tuned by itself three times",
            Some(1),
        ),
    ]
}

pub fn preset(name: &str) -> Result<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Argument(format!("unknown preset {name:?}")))
}

/// Real presets whose parameter is located by bisection.
pub fn real_superstable_presets() -> Vec<Preset> {
    presets()
        .into_iter()
        .filter(|p| matches!(p.location, Location::Bisection { .. }))
        .collect()
}

/// `x` printed with twelve significant digits, trailing zeros kept.
pub fn twelve_digits(x: f64) -> String {
    let e = x.abs().log10().floor() as i32;
    let decimals = (11 - e).max(0) as usize;
    format!("{x:.decimals$}")
}
