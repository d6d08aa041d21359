//! Checks of the strip, cylinder and holomorphic-annulus inequalities on
//! computed moduli. A verdict is `Pass` only when the error bars cannot
//! straddle the inequality.

use serde::{Deserialize, Serialize};

use super::Modulus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Combination of two verdicts that must both hold.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Pass, Verdict::Pass) => Verdict::Pass,
            _ => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub name: String,
    pub lhs: Modulus,
    pub rhs: Modulus,
    pub status: Verdict,
    /// `rhs - lhs` at the central values (negative when violated).
    pub slack: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl InequalityVerdict {
    /// `lhs <= rhs` (or `<`; the two are not distinguishable numerically).
    pub fn le(name: &str, lhs: Modulus, rhs: Modulus) -> Self {
        let status = if lhs.hi() <= rhs.lo() {
            Verdict::Pass
        } else if lhs.lo() > rhs.hi() {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        InequalityVerdict {
            name: name.into(),
            lhs,
            rhs,
            status,
            slack: rhs.value - lhs.value,
            notes: Vec::new(),
        }
    }

    /// `lhs = rhs` within the relative tolerance `tol` of `rhs`.
    pub fn approx(name: &str, lhs: Modulus, rhs: Modulus, tol: f64) -> Self {
        let gap = (lhs.value - rhs.value).abs();
        let allowed = tol * rhs.value;
        let bars = lhs.error + rhs.error;
        let status = if gap + bars <= allowed {
            Verdict::Pass
        } else if gap - bars > allowed {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        InequalityVerdict {
            name: name.into(),
            lhs,
            rhs,
            status,
            slack: allowed - gap,
            notes: vec![format!("relative tolerance {tol}")],
        }
    }

    /// Verdict without a numerical comparison, e.g. for a failed hypothesis.
    pub fn inconclusive(name: &str, lhs: Modulus, rhs: Modulus, why: &str) -> Self {
        InequalityVerdict {
            name: name.into(),
            lhs,
            rhs,
            status: Verdict::Inconclusive,
            slack: rhs.value - lhs.value,
            notes: vec![why.into()],
        }
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Verdict::Pass
    }
}

/// `h/(2a) <= mod <= h/a` for the strip of height `h` over a base of
/// length `a`. The lower bound is checked only when `h/a <= 1/2`; the
/// alternative hypothesis `mod <= 1/4` is not used.
pub fn check_pi_bounds(h: f64, a: f64, computed: Modulus) -> InequalityVerdict {
    let t = h / a;
    let upper = InequalityVerdict::le("strip upper bound", computed, Modulus::exact(t));
    let mut v = InequalityVerdict {
        name: "strip bounds".into(),
        lhs: computed,
        rhs: Modulus::exact(t),
        status: upper.status,
        slack: upper.slack,
        notes: Vec::new(),
    };
    if upper.status == Verdict::Fail {
        v.notes.push("fail upper bound".into());
    }
    if t <= 0.5 {
        let lower = InequalityVerdict::le("strip lower bound", Modulus::exact(t / 2.0), computed);
        v.status = v.status.and(lower.status);
        v.slack = v.slack.min(lower.slack);
        if lower.status == Verdict::Fail {
            v.notes.push("fail lower bound".into());
        }
    } else {
        v.notes.push(format!("lower bound not checked: h/a = {t} > 1/2"));
    }
    v
}

/// `mod strip >= min(mod cylinder, 1/2) / 2` for a strip covering the
/// cylinder with its base embedded in the bottom circle.
pub fn check_cylinder_bound(mod_strip: Modulus, mod_cyl: Modulus) -> InequalityVerdict {
    let rhs = if mod_cyl.value < 0.5 {
        mod_cyl.scaled(0.5)
    } else {
        Modulus::exact(0.25)
    };
    InequalityVerdict::le("cylinder bound", rhs, mod_strip)
}

/// `mod holomorphic <= 16 mod embedded`.
pub fn check_groetzsch16(mod_holomorphic: Modulus, mod_embedded: Modulus) -> InequalityVerdict {
    let ratio = mod_holomorphic.value / mod_embedded.value;
    InequalityVerdict::le("holomorphic versus embedded annulus", mod_holomorphic, mod_embedded.scaled(16.0))
        .note(format!("ratio {ratio:.6}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: f64) -> Modulus {
        Modulus::exact(x)
    }

    #[test]
    fn pi_bound_examples() {
        assert_eq!(check_pi_bounds(0.25, 1.0, m(0.21)).status, Verdict::Pass);
        let v = check_pi_bounds(0.5, 1.0, m(0.6));
        assert_eq!(v.status, Verdict::Fail);
        assert_eq!(v.notes, vec!["fail upper bound".to_string()]);
        assert_eq!(check_pi_bounds(0.25, 1.0, m(0.1)).status, Verdict::Fail);
        let v = check_pi_bounds(1.0, 1.0, m(0.3));
        assert_eq!(v.status, Verdict::Pass);
        assert!(v.notes[0].starts_with("lower bound not checked"));
    }

    #[test]
    fn straddling_error_bars_are_inconclusive() {
        let v = check_pi_bounds(0.25, 1.0, Modulus::new(0.249, 0.01));
        assert_eq!(v.status, Verdict::Inconclusive);
    }

    #[test]
    fn approximate_equality() {
        assert_eq!(InequalityVerdict::approx("x", m(1.01), m(1.0), 0.02).status, Verdict::Pass);
        assert_eq!(InequalityVerdict::approx("x", m(1.05), m(1.0), 0.02).status, Verdict::Fail);
        let v = InequalityVerdict::approx("x", Modulus::new(1.015, 0.01), m(1.0), 0.02);
        assert_eq!(v.status, Verdict::Inconclusive);
    }

    #[test]
    fn cylinder_examples() {
        assert_eq!(check_cylinder_bound(m(0.3), m(0.4)).status, Verdict::Pass);
        assert_eq!(check_cylinder_bound(m(0.2), m(0.6)).status, Verdict::Fail);
    }

    #[test]
    fn groetzsch_examples() {
        assert_eq!(check_groetzsch16(m(1.3), m(1.3)).status, Verdict::Pass);
        assert_eq!(check_groetzsch16(m(17.0), m(1.0)).status, Verdict::Fail);
    }
}
