use super::sweeps::*;
use super::*;
use crate::presets::preset;

fn small() -> GridParams {
    GridParams {
        longest: 256,
        coarse: 128,
        ..GridParams::default()
    }
}

fn m(x: f64) -> Modulus {
    Modulus::exact(x)
}

#[test]
fn covering_factor_detects_a_mislabeled_degree() {
    assert_eq!(covering_verdict("c", m(1.0), m(0.5), 2).status, Verdict::Pass);
    let v = covering_verdict("c", m(1.0), m(0.5), 4);
    assert_eq!(v.status, Verdict::Fail);
    assert!(v.notes.iter().any(|n| n == "degree 4"));
}

#[test]
fn airplane_ledger_and_chain() {
    let config = RunConfig {
        grid: small(),
        ..RunConfig::default()
    };
    let c = preset("airplane").unwrap().parameter().unwrap();
    let r = ledger_report(c, &config).unwrap();
    assert_eq!(r.nest.period, Some(3));
    for name in ["mod(Y0, R)", "mod(Z0, L)", "mod(E0, E1)"] {
        let e = r.moduli.iter().find(|e| e.name == name).unwrap();
        assert!(e.modulus.value > 0.0 && e.modulus.value.is_finite(), "{name}");
    }
    let covering: Vec<_> = r.verdicts.iter().filter(|v| v.name.starts_with("covering factor")).collect();
    assert_eq!(covering.len(), r.nest.levels.len() - 1);
    assert!(covering.iter().all(|v| v.status != Verdict::Fail), "{covering:#?}");
    assert!(r.verdicts.iter().any(|v| v.name == "top-level estimate"));
}

#[test]
fn fixture_sweeps_pass() {
    let config = RunConfig {
        grid: GridParams {
            longest: 512,
            coarse: 256,
            ..GridParams::default()
        },
        ..RunConfig::default()
    };
    for check in ["degree-n", "series", "parallel", "qal", "covering", "groetzsch"] {
        let s = run_check(check, &config).unwrap();
        assert_eq!(s.violations, 0, "{s:#?}");
    }
    assert!(run_check("bogus", &config).is_err());
}

#[test]
fn qal_fixture_collars_hold() {
    let s = qal_fixture(&small(), &RunConfig::default()).unwrap();
    let v = &s.rows[0].verdict;
    assert!(v.notes[0].starts_with("conditional on delta"), "{v:?}");
}
