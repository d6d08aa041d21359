//! Exact external angles on the circle `R/Z` and the combinatorics of the
//! doubling map: the cycle of rays landing at the dividing fixed point,
//! preimages, combinatorial lengths and dyadic vertex labels.
//!
//! Nothing here touches floating point except [`Angle::to_f64`], which is
//! only used when an angle is handed to the numerical tracer.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational point of the circle, stored reduced in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn half() -> Self {
        Angle::new(1u32, 2u32)
    }

    /// `numerator / denominator` taken mod 1. Panics on a zero denominator;
    /// use [`Angle::from_str`] for untrusted input.
    pub fn new(numerator: impl Into<BigUint>, denominator: impl Into<BigUint>) -> Self {
        let den: BigUint = denominator.into();
        assert!(!den.is_zero(), "angle with zero denominator");
        Angle::from_rational(BigRational::new(
            BigInt::from(numerator.into()),
            BigInt::from(den),
        ))
    }

    /// Reduces an arbitrary rational mod 1.
    pub fn from_rational(r: BigRational) -> Self {
        let fl = r.floor();
        Angle(r - fl)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numerator(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denominator(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// The angle action of `z -> z^2 + c`: `2a mod 1`.
    pub fn doubling(&self) -> Angle {
        Angle::from_rational(&self.0 * BigInt::from(2))
    }

    /// `2^k a mod 1`.
    pub fn doubling_n(&self, k: usize) -> Angle {
        let num = self.0.numer() << k;
        let (_, rem) = num.div_rem(self.0.denom());
        Angle(BigRational::new(rem, self.0.denom().clone()))
    }

    /// The two preimages `a/2` and `a/2 + 1/2` under doubling.
    pub fn halves(&self) -> [Angle; 2] {
        let h = Angle(&self.0 / BigInt::from(2));
        let h2 = h.add(&Angle::half());
        [h, h2]
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::from_rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        Angle::from_rational(&self.0 - &other.0)
    }

    /// Length of the counterclockwise arc from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> Angle {
        other.sub(self)
    }

    /// `self` scaled by a rational factor, reduced mod 1.
    pub fn scaled(&self, factor: &BigRational) -> Angle {
        Angle::from_rational(&self.0 * factor)
    }

    /// True when `self` lies on the closed counterclockwise arc `[start, end]`.
    /// An arc with `start == end` is the single point.
    pub fn in_closed_arc(&self, start: &Angle, end: &Angle) -> bool {
        start.ccw_to(self) <= start.ccw_to(end)
    }

    /// True when `self` lies on the open counterclockwise arc `(start, end)`.
    /// With `start == end` the open arc is the full circle minus that point.
    pub fn in_open_arc(&self, start: &Angle, end: &Angle) -> bool {
        if self == start || self == end {
            return false;
        }
        if start == end {
            return true;
        }
        start.ccw_to(self) < start.ccw_to(end)
    }

    /// Smallest `m` with `2^m a` in `targets`, searching up to `max_depth`.
    pub fn preperiod_into(&self, targets: &[Angle], max_depth: usize) -> Option<usize> {
        let mut a = self.clone();
        for m in 0..=max_depth {
            if targets.contains(&a) {
                return Some(m);
            }
            a = a.doubling();
        }
        None
    }

    /// Exact period under doubling, if the angle is periodic (odd denominator).
    pub fn period(&self) -> Option<usize> {
        let den = self.denominator();
        if den.is_even() {
            return None;
        }
        let mut a = self.doubling();
        let mut k = 1;
        while a != *self {
            a = a.doubling();
            k += 1;
        }
        Some(k)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad angle numerator in {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad angle denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in angle {s:?}")));
        }
        if n.is_negative() || d.is_negative() {
            return Err(Error::Parse(format!("negative angle {s:?}")));
        }
        Ok(Angle::from_rational(BigRational::new(n, d)))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn doubling(a: &Angle) -> Angle {
    a.doubling()
}

/// All `2^depth` angles `b` with `2^depth b = a`, in increasing order.
pub fn preimages(a: &Angle, depth: usize) -> Vec<Angle> {
    let scale = BigInt::one() << depth;
    let mut out: Vec<Angle> = (0..(1u64 << depth.min(62)))
        .map(|k| {
            Angle::from_rational((a.as_rational() + BigInt::from(k)) / scale.clone())
        })
        .collect();
    out.sort();
    out
}

/// The cycle of `q` angles whose rays land at the dividing fixed point of a
/// map with combinatorial rotation number `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleCycle {
    /// Sorted increasingly in `[0, 1)`.
    pub angles: Vec<Angle>,
    pub rotation: (u32, u32),
}

impl AngleCycle {
    pub fn period(&self) -> usize {
        self.angles.len()
    }

    pub fn p(&self) -> u32 {
        self.rotation.0
    }

    pub fn q(&self) -> u32 {
        self.rotation.1
    }

    pub fn contains(&self, a: &Angle) -> bool {
        self.angles.binary_search(a).is_ok()
    }

    /// Index of `a` in the sorted cycle.
    pub fn index_of(&self, a: &Angle) -> Option<usize> {
        self.angles.binary_search(a).ok()
    }

    /// The cycle reflected by `z -> -z`: the rays landing at `-alpha`.
    pub fn negated(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self.angles.iter().map(|a| a.add(&Angle::half())).collect();
        v.sort();
        v
    }
}

/// Largest `q` accepted by [`alpha_cycle`].
pub const MAX_ROTATION_DENOMINATOR: u32 = 64;

/// The unique period-`q` cycle of the doubling map with combinatorial
/// rotation number `p/q`.
///
/// The `i`-th smallest angle of the cycle has binary digit `k` equal to 1
/// exactly when `(i + k p) mod q >= q - p`, i.e. when its `k`-th image is one
/// of the `p` angles in `[1/2, 1)`. The result is checked exactly to be a
/// cycle of period `q` advancing by `p` positions per step.
pub fn alpha_cycle(p: u32, q: u32) -> Result<AngleCycle> {
    if q < 2 || p < 1 || p >= q || p.gcd(&q) != 1 {
        return Err(Error::Argument(format!(
            "rotation number {p}/{q} must satisfy 1 <= p < q with gcd(p, q) = 1"
        )));
    }
    if q > MAX_ROTATION_DENOMINATOR {
        return Err(Error::Argument(format!(
            "rotation denominator {q} exceeds {MAX_ROTATION_DENOMINATOR}"
        )));
    }
    let den = (BigUint::one() << q as usize) - BigUint::one();
    let angles: Vec<Angle> = (0..q)
        .map(|i| {
            let mut num = BigUint::zero();
            for k in 0..q {
                num <<= 1;
                if (i + k * p) % q >= q - p {
                    num += 1u32;
                }
            }
            Angle::new(num, den.clone())
        })
        .collect();
    let cycle = AngleCycle {
        angles,
        rotation: (p, q),
    };
    check_rotation_cycle(&cycle)?;
    Ok(cycle)
}

fn check_rotation_cycle(cycle: &AngleCycle) -> Result<()> {
    let q = cycle.angles.len();
    let p = cycle.rotation.0 as usize;
    if cycle.angles.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Internal("rotation cycle not strictly sorted".into()));
    }
    for (i, a) in cycle.angles.iter().enumerate() {
        if a.doubling() != cycle.angles[(i + p) % q] {
            return Err(Error::Internal(format!(
                "doubling does not advance the cycle by {p} at {a}"
            )));
        }
    }
    Ok(())
}

/// Combinatorial length `2^k / ((2^q - 1) 2^m)` of an external arc of a
/// depth-`m` puzzle piece.
pub fn combinatorial_length(k: u32, m: u32, q: u32) -> BigRational {
    assert!(k < q, "combinatorial_length needs k <= q - 1");
    let num = BigInt::one() << k as usize;
    let den = ((BigInt::one() << q as usize) - BigInt::one()) << m as usize;
    BigRational::new(num, den)
}

/// Side of the chord joining `alpha` and `-alpha` inside the critical piece
/// of depth 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// Below the chord; binary digit 1.
    Plus,
    /// Above the chord; binary digit 0.
    Minus,
}

impl Sign {
    pub fn bit(self) -> u8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => 0,
        }
    }

    pub fn from_bit(bit: u8) -> Sign {
        if bit == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Dyadic label `i / 2^m` (odd `i`) of an `f^{qm}`-preimage of `alpha`
/// inside the critical piece of depth 1; `alpha` itself carries 0.
///
/// A preimage of depth `m` is encoded by `m - 1` signs followed by a final
/// digit 1, so `-alpha` (depth 1, no signs) is labelled `1/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicVertexLabel {
    pub value: Angle,
    pub signs: Vec<Sign>,
    pub is_alpha: bool,
}

impl DyadicVertexLabel {
    pub fn alpha() -> Self {
        DyadicVertexLabel {
            value: Angle::zero(),
            signs: Vec::new(),
            is_alpha: true,
        }
    }

    /// Label `0.e_1 ... e_{m-1} 1` in binary for a preimage of depth `m`.
    pub fn preimage(signs: &[Sign]) -> Self {
        let mut num = BigUint::zero();
        for s in signs {
            num = (num << 1) + BigUint::from(s.bit());
        }
        num = (num << 1) + BigUint::one();
        let den = BigUint::one() << (signs.len() + 1);
        DyadicVertexLabel {
            value: Angle::new(num, den),
            signs: signs.to_vec(),
            is_alpha: false,
        }
    }

    /// Depth `m` of the preimage (0 for alpha).
    pub fn depth(&self) -> usize {
        if self.is_alpha {
            0
        } else {
            self.signs.len() + 1
        }
    }

    /// Inverse of the encoding: recovers the signs from a dyadic value.
    pub fn decode(value: &Angle) -> Option<DyadicVertexLabel> {
        if value.is_zero() {
            return Some(DyadicVertexLabel::alpha());
        }
        let den = value.denominator();
        let m = den.bits() as usize - 1;
        if den != (BigUint::one() << m) {
            return None;
        }
        let num = value.numerator();
        let signs = (1..m)
            .map(|k| Sign::from_bit(u8::from(num.bit((m - k) as u64))))
            .collect::<Vec<_>>();
        Some(DyadicVertexLabel::preimage(&signs))
    }
}

/// Encodes a sign word; the empty word is the label of `alpha`.
pub fn dyadic_label(signs: &[Sign]) -> DyadicVertexLabel {
    if signs.is_empty() {
        DyadicVertexLabel::alpha()
    } else {
        DyadicVertexLabel::preimage(signs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling(&a("1/7")), a("2/7"));
        assert_eq!(doubling(&a("0")), a("0"));
        assert_eq!(doubling(&a("2/3")), a("1/3"));
        assert_eq!(a("5/12").doubling_n(3), a("1/3"));
    }

    #[test]
    fn alpha_cycle_small_cases() {
        let c = alpha_cycle(1, 2).unwrap();
        assert_eq!(c.angles, vec![a("1/3"), a("2/3")]);
        let c = alpha_cycle(1, 3).unwrap();
        assert_eq!(c.angles, vec![a("1/7"), a("2/7"), a("4/7")]);
        let c = alpha_cycle(2, 3).unwrap();
        assert_eq!(c.angles, vec![a("3/7"), a("5/7"), a("6/7")]);
    }

    #[test]
    fn alpha_cycle_rejects_bad_rotation() {
        assert!(alpha_cycle(2, 4).is_err());
        assert!(alpha_cycle(0, 3).is_err());
        assert!(alpha_cycle(3, 3).is_err());
        assert!(alpha_cycle(1, 65).is_err());
        assert!(alpha_cycle(1, 64).is_ok());
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(preimages(&a("1/3"), 1), vec![a("1/6"), a("2/3")]);
        assert_eq!(preimages(&a("0"), 1), vec![a("0"), a("1/2")]);
        assert_eq!(
            preimages(&a("1/7"), 2),
            vec![a("1/28"), a("2/7"), a("15/28"), a("11/14")]
        );
    }

    #[test]
    fn combinatorial_length_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(combinatorial_length(0, 0, 2), r(1, 3));
        assert_eq!(combinatorial_length(1, 0, 2), r(2, 3));
        assert_eq!(combinatorial_length(0, 3, 3), r(1, 56));
    }

    #[test]
    fn dyadic_label_examples() {
        assert_eq!(dyadic_label(&[]).value, Angle::zero());
        assert!(dyadic_label(&[]).is_alpha);
        assert_eq!(DyadicVertexLabel::preimage(&[]).value, a("1/2"));
        let l = dyadic_label(&[Sign::Plus, Sign::Minus]);
        assert_eq!(l.value, a("5/8"));
        assert_eq!(l.depth(), 3);
        assert_eq!(DyadicVertexLabel::decode(&a("5/8")), Some(l));
        assert_eq!(DyadicVertexLabel::decode(&a("1/3")), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(a("2/4").to_string(), "1/2");
        assert_eq!(a("7/7"), Angle::zero());
        assert!("1/0".parse::<Angle>().is_err());
        assert!("x/3".parse::<Angle>().is_err());
        let json = serde_json::to_string(&a("3/7")).unwrap();
        assert_eq!(json, "\"3/7\"");
        assert_eq!(serde_json::from_str::<Angle>(&json).unwrap(), a("3/7"));
    }

    #[test]
    fn arcs() {
        assert!(a("1/2").in_open_arc(&a("1/3"), &a("2/3")));
        assert!(!a("1/2").in_open_arc(&a("2/3"), &a("1/3")));
        assert!(a("0").in_open_arc(&a("2/3"), &a("1/3")));
        assert!(a("1/3").in_closed_arc(&a("1/3"), &a("2/3")));
        assert_eq!(a("2/3").ccw_to(&a("1/3")), a("2/3"));
    }

    #[test]
    fn periods() {
        assert_eq!(a("1/7").period(), Some(3));
        assert_eq!(a("1/6").period(), None);
        assert_eq!(a("0").period(), Some(1));
        let theta = alpha_cycle(1, 2).unwrap().angles;
        assert_eq!(a("1/12").preperiod_into(&theta, 5), Some(2));
    }

    /// Independent search: every period-q cycle of `r -> 2r mod (2^q - 1)`
    /// whose sorted order is advanced by exactly `p` positions.
    fn exhaustive_cycles(p: usize, q: usize) -> Vec<Vec<u64>> {
        let m = (1u64 << q) - 1;
        let mut seen = vec![false; m as usize];
        let mut found = Vec::new();
        for r0 in 1..m {
            if seen[r0 as usize] {
                continue;
            }
            let mut orbit = vec![r0];
            let mut r = (2 * r0) % m;
            while r != r0 {
                orbit.push(r);
                r = (2 * r) % m;
            }
            for &x in &orbit {
                seen[x as usize] = true;
            }
            if orbit.len() != q {
                continue;
            }
            let mut sorted = orbit.clone();
            sorted.sort_unstable();
            let ok = sorted
                .iter()
                .enumerate()
                .all(|(i, &x)| (2 * x) % m == sorted[(i + p) % q]);
            if ok {
                found.push(sorted);
            }
        }
        found
    }

    #[test]
    fn alpha_cycle_matches_exhaustive_search() {
        for q in 2..=8u32 {
            for p in 1..q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let found = exhaustive_cycles(p as usize, q as usize);
                assert_eq!(found.len(), 1, "p/q = {p}/{q}");
                let den = (1u64 << q) - 1;
                let expected: Vec<Angle> =
                    found[0].iter().map(|&n| Angle::new(n, den)).collect();
                assert_eq!(alpha_cycle(p, q).unwrap().angles, expected);
            }
        }
    }

    use proptest::prelude::*;

    fn angle_strategy() -> impl Strategy<Value = Angle> {
        (1u64..10_000).prop_flat_map(|d| (0..d, Just(d))).prop_map(|(n, d)| Angle::new(n, d))
    }

    proptest! {
        #[test]
        fn preimages_map_back(a in angle_strategy(), depth in 0usize..6) {
            let pre = preimages(&a, depth);
            prop_assert_eq!(pre.len(), 1 << depth);
            for b in &pre {
                prop_assert_eq!(b.doubling_n(depth), a.clone());
            }
        }

        #[test]
        fn doubling_denominator_divides(a in angle_strategy()) {
            let d = a.denominator();
            prop_assert!((d % a.doubling().denominator()).is_zero());
        }

        #[test]
        fn alpha_cycle_steps_by_p(q in 2u32..40, p0 in 1u32..40) {
            let p = 1 + p0 % (q - 1);
            prop_assume!(p.gcd(&q) == 1);
            let c = alpha_cycle(p, q).unwrap();
            for (i, a) in c.angles.iter().enumerate() {
                prop_assert_eq!(&a.doubling(), &c.angles[(i + p as usize) % q as usize]);
            }
        }

        #[test]
        fn depth0_arc_lengths_sum_to_one(q in 2u32..12, p0 in 1u32..12) {
            let p = 1 + p0 % (q - 1);
            prop_assume!(p.gcd(&q) == 1);
            let c = alpha_cycle(p, q).unwrap();
            let mut total = BigRational::zero();
            let mut multiset = Vec::new();
            for i in 0..c.angles.len() {
                let next = &c.angles[(i + 1) % c.angles.len()];
                let len = c.angles[i].ccw_to(next);
                total += len.as_rational().clone();
                multiset.push(len);
            }
            prop_assert!(total.is_one());
            let mut expected: Vec<Angle> = (0..q)
                .map(|k| Angle::from_rational(combinatorial_length(k, 0, q)))
                .collect();
            expected.sort();
            multiset.sort();
            prop_assert_eq!(multiset, expected);
        }

        #[test]
        fn dyadic_round_trip(bits in proptest::collection::vec(0u8..2, 0..20)) {
            let signs: Vec<Sign> = bits.iter().map(|&b| Sign::from_bit(b)).collect();
            let l = DyadicVertexLabel::preimage(&signs);
            prop_assert!(l.value.denominator() == BigUint::one() << (signs.len() + 1));
            prop_assert_eq!(DyadicVertexLabel::decode(&l.value), Some(l));
        }
    }
}
