use super::*;
use crate::angles::{alpha_cycle, Angle};
use crate::dynamics::ray::TraceParams;

fn a(s: &str) -> Angle {
    s.parse().unwrap()
}

fn basilica() -> Puzzle {
    Puzzle::new(QuadraticMap::real(-1.0), TraceParams::default(), alpha_cycle(1, 2).unwrap()).unwrap()
}

fn rabbit() -> Puzzle {
    let c = Complex64::new(-0.122561166876654, 0.744861766619744);
    Puzzle::new(QuadraticMap::new(c), TraceParams::default(), alpha_cycle(1, 3).unwrap()).unwrap()
}

#[test]
fn c_zero_has_no_puzzle() {
    let r = Puzzle::new(QuadraticMap::real(0.0), TraceParams::default(), alpha_cycle(1, 2).unwrap());
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn wrong_cycle_is_a_landing_error() {
    let r = Puzzle::new(QuadraticMap::real(-1.0), TraceParams::default(), alpha_cycle(1, 3).unwrap());
    assert!(matches!(r, Err(Error::Landing { .. })));
}

#[test]
fn basilica_critical_pieces() {
    let pz = basilica();
    assert_eq!(pz.period, Some(2));
    let y1 = pz.critical_piece(1).unwrap();
    assert_eq!(
        y1.vertices,
        vec![Vertex::new(a("1/3"), a("2/3")), Vertex::new(a("5/6"), a("1/6"))]
    );
    for k in 0..4 {
        let y = pz.critical_piece(k).unwrap();
        assert!(pz.encloses(&y, k, Complex64::new(0.0, 0.0)).unwrap(), "Y[{k}]");
        let v = pz.orbit_piece(1, k).unwrap();
        assert!(pz.encloses(&v, k, pz.map().c).unwrap(), "P[1,{k}]");
        if k > 0 {
            assert!(pz.critical_piece(k - 1).unwrap().contains_piece(&y));
        }
    }
}

#[test]
fn depth_one_family_has_2q_minus_1_pieces() {
    for (pz, q) in [(basilica(), 2usize), (rabbit(), 3)] {
        let fams = pz.families(1).unwrap();
        let f1 = &fams[1];
        assert_eq!(f1.len(), 2 * q - 1);
        assert!(f1.critical().is_some());
        for i in 1..q {
            let y = f1.pieces.iter().find(|p| p.label == format!("Y1[{i}]"));
            let z = f1.pieces.iter().find(|p| p.label == format!("Z1[{i}]"));
            let (y, z) = (y.unwrap(), z.unwrap());
            assert_eq!(y.negated(), *z);
        }
        assert!(f1.parent.iter().all(Option::is_some));
    }
}

#[test]
fn located_points_agree_with_orbit_pieces() {
    let pz = rabbit();
    let fams = pz.families(2).unwrap();
    for j in 0..3 {
        let z = pz.orbit_point(j);
        let found = pz.locate(&fams[2], z).unwrap();
        assert_eq!(found, pz.orbit_piece(j, 2).unwrap());
        assert_eq!(pz.piece_containing(z, 2).unwrap(), found);
    }
    let far = Complex64::new(1e3, 0.0);
    assert!(matches!(pz.locate(&fams[2], far), Err(Error::Precondition(_))));
}

#[test]
fn pullback_degree_counts_critical_passes() {
    let pz = basilica();
    let top = pz.depth0()[0].clone().with_level(0);
    let (p, d) = pz.pullback(&top, 2, Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(d, 2);
    assert_eq!(p, pz.critical_piece(2).unwrap());
    let (p, d) = pz.pullback(&top, 4, Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(d, 4);
    assert_eq!(p, pz.critical_piece(4).unwrap());
}

#[test]
fn basilica_dyadic_labels() {
    let pz = basilica();
    let y1 = pz.critical_piece(1).unwrap();
    let labels = pz.dyadic_labels(&y1, 1).unwrap();
    let values: Vec<String> = labels.iter().map(|l| l.as_ref().unwrap().value.to_string()).collect();
    assert_eq!(values, vec!["0", "1/2"]);
}

#[test]
fn lemma_pieces() {
    let pz = basilica();
    assert_eq!(pz.lemma_y0().vertices, vec![Vertex::new(a("1/3"), a("2/3"))]);
    assert_eq!(pz.lemma_z0().vertices, vec![Vertex::new(a("5/6"), a("1/6"))]);
    let z0 = pz.polygon(&pz.lemma_z0(), 0).unwrap();
    let y0 = pz.polygon(&pz.lemma_y0(), 0).unwrap();
    assert!(geometry::winding_number(&y0, Complex64::new(0.0, 0.0)) == 1);
    assert!(geometry::winding_number(&z0, Complex64::new(-1.5, 0.0)) == 1);
    assert!(geometry::winding_number(&z0, Complex64::new(1.5, 0.0)) == 0);
}

fn airplane() -> Puzzle {
    Puzzle::new(QuadraticMap::real(-1.754877666246693), TraceParams::default(), alpha_cycle(1, 2).unwrap()).unwrap()
}

#[test]
fn airplane_separating_pieces() {
    let pz = airplane();
    assert_eq!(pz.period, Some(3));
    let s = pz.separating_pieces(1).unwrap();
    assert_eq!(s.piece.vertices.len(), 2);
    assert_eq!(s.pieces.len(), 2);
    assert!(s.pieces.iter().all(|x| x.depth == 3));
    assert!(s.disjoint, "min distance {}", s.min_distance);
}

#[test]
fn airplane_qn_pullbacks_are_contained() {
    let pz = airplane();
    let checks = pz.check_qn_pullbacks(1, 64).unwrap();
    assert!(!checks.is_empty());
    for c in &checks {
        assert!(c.holds(), "{c:?}");
    }
}
