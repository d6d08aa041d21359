//! Structural invariants of puzzle families and principal nests on a few
//! presets.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};

use yoccoz::config::RunConfig;
use yoccoz::nest::{build_nest, escape_route, RealLineOracle};
use yoccoz::pipeline::puzzle_for;
use yoccoz::presets::{preset, real_superstable_presets};
use yoccoz::puzzle::geometry::directed_hausdorff;
use yoccoz::puzzle::Puzzle;

fn puzzle(name: &str) -> Puzzle {
    puzzle_for(preset(name).unwrap().parameter().unwrap(), &RunConfig::default()).unwrap()
}

#[test]
fn angle_bookkeeping_and_arc_lengths() {
    for name in ["basilica", "rabbit", "airplane"] {
        let pz = puzzle(name);
        let q = pz.q() as i32;
        for family in pz.families(3).unwrap() {
            let m = family.depth as i32;
            let floor = BigRational::new(1.into(), 2.into()).pow(q + m);
            for p in &family.pieces {
                assert!(p.check_angle_bookkeeping(&pz.cycle), "{name}: {p}");
                for len in p.external_arc_lengths() {
                    assert!(*len.as_rational() >= floor, "{name}: arc {len} of {p}");
                    assert!(*len.as_rational() < BigRational::one());
                }
            }
        }
    }
}

#[test]
fn depth_one_counts_and_z_symmetry() {
    for name in ["basilica", "rabbit", "airplane"] {
        let pz = puzzle(name);
        let q = pz.q();
        let depth1 = pz.families(1).unwrap().pop().unwrap();
        assert_eq!(depth1.len(), 2 * q - 1, "{name}");
        for i in 1..q {
            let y = depth1.find(&format!("Y1[{i}]"));
            let z = depth1.find(&format!("Z1[{i}]"));
            if let (Some(y), Some(z)) = (y, z) {
                assert_eq!(y.negated(), *z, "{name}: Z1[{i}] = -Y1[{i}]");
            }
        }
    }
}

#[test]
fn images_of_pieces_match_labelled_images() {
    let pz = puzzle("airplane");
    let families = pz.families(2).unwrap();
    for w in families.windows(2) {
        let (coarse, fine) = (&w[0], &w[1]);
        for (i, p) in fine.pieces.iter().enumerate() {
            let Some(j) = fine.image[i] else { continue };
            let target = pz.polygon(&coarse.pieces[j], coarse.depth).unwrap();
            let image: Vec<Complex64> = pz
                .polygon(p, fine.depth)
                .unwrap()
                .iter()
                .map(|&z| pz.map().apply(z))
                .collect();
            let tol = 2.0 * pz.tracer.params.landing_tol;
            assert!(directed_hausdorff(&image, &target) < tol, "f({}) leaves its image", p.label);
            assert!(directed_hausdorff(&target, &image) < tol, "f({}) misses its image", p.label);
        }
    }
}

#[test]
fn nests_deepen_with_quadratic_returns() {
    let config = RunConfig::default();
    for p in real_superstable_presets().iter().take(10) {
        let c = p.real_parameter().unwrap();
        let oracle = RealLineOracle::new(c).unwrap();
        let d = escape_route(&oracle, config.escape_budget).unwrap();
        let nest = build_nest(&oracle, &d, config.budgets).unwrap();
        let depths = nest.depths();
        assert!(depths.windows(2).all(|w| w[0] < w[1]), "{}: {depths:?}", p.name);
        let times = nest.return_times();
        assert!(times.windows(2).all(|w| w[0] <= w[1]), "{}: {times:?}", p.name);
        for level in nest.levels.iter().skip(1) {
            assert_eq!(level.degree, 2, "{}", p.name);
        }
    }
}
