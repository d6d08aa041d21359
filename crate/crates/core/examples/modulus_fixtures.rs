//! The finite-difference modulus solver on domains with known moduli.
//!
//!     cargo run --release --example modulus_fixtures

use yoccoz::modulus::fixtures::{
    strip_modulus, EccentricAnnulus, FrameKind, LShape, PowerPreimage, Rectangle, RoundAnnulus, Strip, Target,
};
use yoccoz::modulus::{annulus_modulus, quad_modulus, series_law, GridParams, Modulus};
use num_complex::Complex64;

fn main() -> yoccoz::Result<()> {
    let g = GridParams::default();
    for m in [0.05, 0.25, 1.0] {
        let a = RoundAnnulus::with_modulus(m, FrameKind::LogPolar);
        println!("round annulus, exact {m}: {}", annulus_modulus(&a, &g)?);
    }
    let e = EccentricAnnulus { d: Complex64::new(0.3, 0.1), r1: 0.2, r2: 1.0 };
    println!("eccentric annulus, exact {:.6}: {}", e.exact(), annulus_modulus(&e, &g)?);

    for h in [0.1, 2.0] {
        let r = Rectangle { a: 1.0, h, swapped: false };
        println!("rectangle h/a = {h}: {}", quad_modulus(&r, &g)?);
    }
    let l = quad_modulus(&LShape { swapped: false }, &g)?;
    let ls = quad_modulus(&LShape { swapped: true }, &g)?;
    println!("L-shape {l} and swapped {ls}: product {:.4}", l.value * ls.value);

    let t = Target { c0: Complex64::new(0.1, 0.0), r1: 0.3, r2: 1.0, square: false };
    for n in 2..=4 {
        let pre = annulus_modulus(&PowerPreimage { n, target: t }, &g)?;
        println!("z^{n} preimage: {pre}, target / {n} = {:.6}", t.exact().unwrap() / f64::from(n));
    }

    let strip = Strip::new(0.2, 1.0);
    let (lo, hi) = strip.bounds();
    println!("strip h = 0.2: {} in [{lo}, {hi}]", strip_modulus(&strip, &g)?);

    let parts = [Modulus::exact(0.2), Modulus::exact(0.3)];
    let stacked = quad_modulus(&Rectangle { a: 1.0, h: 0.5, swapped: false }, &g)?;
    println!("series law {} vs stacked rectangle {stacked}", series_law(&parts));
    Ok(())
}
