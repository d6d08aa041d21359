use super::*;
use crate::angles::alpha_cycle;
use crate::dynamics::ray::TraceParams;
use crate::dynamics::QuadraticMap;
use crate::puzzle::Puzzle;

const AIRPLANE: f64 = -1.754877666246693;

fn geometric(c: f64) -> Puzzle {
    Puzzle::new(QuadraticMap::real(c), TraceParams::default(), alpha_cycle(1, 2).unwrap()).unwrap()
}

#[test]
fn basilica_is_satellite() {
    let o = RealLineOracle::new(-1.0).unwrap();
    let d = escape_route(&o, 100).unwrap();
    assert!(d.satellite);
    assert!(d.kappa.is_none());
    let nest = build_nest(&o, &d, NestBudgets::default()).unwrap();
    assert_eq!(nest.status, RenormStatus::Satellite);
}

#[test]
fn airplane_real_line() {
    let o = RealLineOracle::new(AIRPLANE).unwrap();
    let d = escape_route(&o, 100).unwrap();
    assert_eq!((d.q, d.n), (2, Some(1)));
    assert_eq!(d.kappa.as_ref().unwrap().len(), 1);
    let nest = build_nest(&o, &d, NestBudgets::default()).unwrap();
    assert_eq!(nest.status, RenormStatus::Renormalizable);
    assert_eq!(nest.chi, Some(1));
    assert_eq!(nest.period, Some(3));
    assert_eq!(nest.depths(), vec![3, 6]);
    assert_eq!(nest.levels[1].degree, 2);
}

#[test]
fn airplane_geometric_matches_real_line() {
    let pz = geometric(AIRPLANE);
    let g = GeometricOracle::new(&pz).unwrap();
    let r = RealLineOracle::new(AIRPLANE).unwrap();
    let dg = escape_route(&g, 100).unwrap();
    let dr = escape_route(&r, 100).unwrap();
    assert_eq!(dg, dr);
    let ng = build_nest(&g, &dg, NestBudgets::default()).unwrap();
    let nr = build_nest(&r, &dr, NestBudgets::default()).unwrap();
    assert_eq!(ng, nr);
    for j in 0..3 {
        assert_eq!(g.depth1_class(j).unwrap(), r.depth1_class(j).unwrap());
    }
}

#[test]
fn return_record_basics() {
    let o = RealLineOracle::new(AIRPLANE).unwrap();
    let d = escape_route(&o, 100).unwrap();
    let rec = return_record(&o, &d, 0, 0, 2).unwrap();
    assert!(rec.r_times.is_empty());
    let rec = return_record(&o, &d, 0, 30, 2).unwrap();
    // Orbit 0 -> c -> c^2 + c: the third point is right of -alpha.
    assert_eq!(rec.r_times, (0..10).map(|k| 3 * k + 2).collect::<Vec<_>>());
    assert_eq!(rec.l_times, (0..10).map(|k| 3 * k + 1).collect::<Vec<_>>());
    assert!(rec.gaps.iter().all(|&g| g == 3));
    assert!(!rec.has_long_gap);
    let rec = return_record(&o, &d, 0, 30, 1).unwrap();
    assert!(rec.has_long_gap);
}

#[test]
fn fine_child_without_central_return_is_first_child() {
    let mut checked = 0;
    for c in [-1.8, -1.85, -1.9, -1.95] {
        let o = RealLineOracle::new(c).unwrap();
        for d in 1..12 {
            let Some(w) = first_child(&o, d, 10_000).unwrap() else { continue };
            if o.same_piece(0, w.return_time, w.depth).unwrap() {
                continue;
            }
            let fine = fine_child(&o, w.depth, w.return_time, 10_000).unwrap();
            let first = first_child(&o, w.depth, 10_000).unwrap();
            let (Some(fine), Some(first)) = (fine, first) else {
                continue;
            };
            assert_eq!(fine.escape_index, Some(1));
            assert_eq!(fine.return_time, first.return_time);
            assert_eq!(fine.depth, first.depth);
            checked += 1;
        }
    }
    assert!(checked > 0);
}
