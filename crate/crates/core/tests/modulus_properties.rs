//! Conformal invariance, monotonicity, reciprocity and the refinement error
//! story of the modulus solver, plus the verdict rules.

use num_complex::Complex64;
use proptest::prelude::*;

use yoccoz::modulus::fixtures::{
    strip_modulus, EccentricAnnulus, FrameKind, LShape, Rectangle, RoundAnnulus, Strip,
};
use yoccoz::modulus::laws::{InequalityVerdict, Verdict};
use yoccoz::modulus::{annulus_modulus, quad_modulus, GridParams, Modulus, Rasterize};

fn grid(longest: usize) -> GridParams {
    GridParams {
        longest,
        coarse: longest / 2,
        ..GridParams::default()
    }
}

fn agree(a: Modulus, b: Modulus) -> bool {
    (a.value - b.value).abs() <= a.error + b.error
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn affine_images_agree(
        re in -2.0f64..2.0, im in -2.0f64..2.0, scale in 0.3f64..3.0, turn in 0.0f64..6.3,
        d in 0.0f64..0.4,
    ) {
        let e = EccentricAnnulus { d: Complex64::new(d, 0.0), r1: 0.3, r2: 1.0 };
        let g = grid(256);
        let base = annulus_modulus(&e, &g).unwrap();
        let image = annulus_modulus(&e.affine(Complex64::from_polar(scale, turn), Complex64::new(re, im)), &g).unwrap();
        prop_assert!(agree(base, image), "{base} vs {image}");
    }

    #[test]
    fn enlarging_the_outer_boundary_does_not_decrease_the_modulus(
        r2 in 0.6f64..1.5, grow in 1.05f64..2.0, d in 0.0f64..0.2,
    ) {
        let g = grid(256);
        let small = EccentricAnnulus { d: Complex64::new(d, 0.0), r1: 0.25, r2 };
        let big = EccentricAnnulus { r2: r2 * grow, ..small };
        let (a, b) = (annulus_modulus(&small, &g).unwrap(), annulus_modulus(&big, &g).unwrap());
        prop_assert!(a.lo() <= b.hi(), "{a} > {b}");
    }

    #[test]
    fn swapped_rectangles_are_reciprocal(a in 0.3f64..3.0, h in 0.3f64..3.0) {
        let g = grid(256);
        let m = quad_modulus(&Rectangle { a, h, swapped: false }, &g).unwrap();
        let s = quad_modulus(&Rectangle { a, h, swapped: true }, &g).unwrap();
        prop_assert!((m.value * s.value - 1.0).abs() < 0.02);
    }

    #[test]
    fn straddling_error_bars_never_pass(
        x in 0.0f64..2.0, y in 0.0f64..2.0, ex in 0.0f64..0.5, ey in 0.0f64..0.5,
    ) {
        let (l, r) = (Modulus::new(x, ex), Modulus::new(y, ey));
        let v = InequalityVerdict::le("p", l, r);
        let straddle = l.hi() > r.lo() && l.lo() <= r.hi();
        if straddle {
            prop_assert_eq!(v.status, Verdict::Inconclusive);
        }
        if v.status == Verdict::Pass {
            prop_assert!(l.hi() <= r.lo());
        }
    }
}

/// Halving the cell size from the reported (512, 256) ladder moves the
/// value by less than the reported error.
#[test]
fn refinement_stays_within_the_error_bar() {
    let fixtures: Vec<(&str, Box<dyn Rasterize>)> = vec![
        ("cartesian round annulus", Box::new(RoundAnnulus::with_modulus(0.25, FrameKind::Cartesian))),
        ("eccentric annulus", Box::new(EccentricAnnulus { d: Complex64::new(0.3, 0.0), r1: 0.3, r2: 1.0 })),
    ];
    for (name, f) in &fixtures {
        let m = annulus_modulus(f.as_ref(), &grid(512)).unwrap();
        let finer = annulus_modulus(f.as_ref(), &grid(1024)).unwrap();
        assert!((finer.value - m.value).abs() <= m.error, "{name}: {m} -> {finer}");
    }
    let l = quad_modulus(&LShape { swapped: false }, &grid(512)).unwrap();
    let finer = quad_modulus(&LShape { swapped: false }, &grid(1024)).unwrap();
    assert!((finer.value - l.value).abs() <= l.error, "L-shape: {l} -> {finer}");
    let s = strip_modulus(&Strip::new(0.2, 1.0), &grid(512)).unwrap();
    let finer = strip_modulus(&Strip::new(0.2, 1.0), &grid(1024)).unwrap();
    assert!((finer.value - s.value).abs() <= s.error, "strip: {s} -> {finer}");
}
