//! Acceptance run: one pass/fail line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::Integer;
use yoccoz::config::RunConfig;
use yoccoz::modulus::fixtures::{FrameKind, Rectangle, RoundAnnulus};
use yoccoz::modulus::{annulus_modulus, quad_modulus, GridParams};
use yoccoz::nest::{build_nest, escape_route, GeometricOracle, RealLineOracle};
use yoccoz::pipeline::puzzle_for;
use yoccoz::presets::{preset, presets, real_superstable_presets};
use yoccoz::verify::apriori_report;
use yoccoz::verify::sweeps::{cylinder_sweep, degree_n_sweep, groetzsch_fixture, parallel_sweep, pi_bounds_sweep, series_sweep, Sweep, PI_RATIOS};
use yoccoz::{alpha_cycle, Angle};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// All period-`q` cycles of doubling whose cyclic order advances by `p`.
fn exhaustive_cycle(p: u32, q: u32) -> Vec<BTreeSet<Angle>> {
    let d = (1u64 << q) - 1;
    let mut seen = BTreeSet::new();
    let mut hits = Vec::new();
    for k in 1..d {
        if seen.contains(&k) {
            continue;
        }
        let mut orbit = vec![k];
        let mut x = (2 * k) % d;
        while x != k {
            orbit.push(x);
            x = (2 * x) % d;
        }
        seen.extend(orbit.iter().copied());
        if orbit.len() != q as usize {
            continue;
        }
        let mut sorted = orbit.clone();
        sorted.sort_unstable();
        let n = sorted.len();
        let rotates = (0..n).all(|i| (2 * sorted[i]) % d == sorted[(i + p as usize) % n]);
        if rotates {
            hits.push(sorted.iter().map(|&a| Angle::new(a, d)).collect());
        }
    }
    hits
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for q in 2..=8u32 {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            let ours: BTreeSet<Angle> = alpha_cycle(p, q).map_err(err)?.angles.into_iter().collect();
            let oracle = exhaustive_cycle(p, q);
            if oracle != vec![ours] {
                return Err(format!("{p}/{q}: oracle found {} matching cycles", oracle.len()));
            }
            pairs += 1;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(1), format!("{pairs} rotation numbers match, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let g = GridParams { longest: 1024, coarse: 512, ..GridParams::default() };
    let mut worst: f64 = 0.0;
    for m in [0.05, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let a = RoundAnnulus::with_modulus(m, FrameKind::LogPolar);
        let v = annulus_modulus(&a, &g).map_err(err)?;
        worst = worst.max((v.value - m).abs() / m);
    }
    for t in [0.1, 0.5, 1.0, 2.0] {
        let r = Rectangle { a: 1.0, h: t, swapped: false };
        let v = quad_modulus(&r, &g).map_err(err)?;
        worst = worst.max((v.value - t).abs() / t);
    }
    let t = start.elapsed();
    check(
        worst < 0.01 && t < Duration::from_secs(30),
        format!("worst relative error {worst:.2e}, {t:.2?}"),
    )
}

fn sweeps_clean(sweeps: &[Sweep]) -> Outcome {
    let rows: usize = sweeps.iter().map(|s| s.rows.len()).sum();
    let bad: usize = sweeps.iter().map(|s| s.violations).sum();
    let names: Vec<&str> = sweeps.iter().map(|s| s.check.as_str()).collect();
    check(bad == 0 && rows > 0, format!("{rows} cases of {}, {bad} violations", names.join(" + ")))
}

fn criterion_3(g: &GridParams) -> Outcome {
    sweeps_clean(&[degree_n_sweep(&[2, 3, 4], g).map_err(err)?])
}

fn criterion_4(g: &GridParams) -> Outcome {
    sweeps_clean(&[pi_bounds_sweep(&PI_RATIOS, g).map_err(err)?])
}

fn criterion_5(g: &GridParams) -> Outcome {
    let cyl = cylinder_sweep(&[(0.2, 1.0), (0.5, 1.0), (1.0, 1.0), (2.0, 1.0)], g).map_err(err)?;
    sweeps_clean(&[cyl, groetzsch_fixture(g).map_err(err)?])
}

fn criterion_6(config: &RunConfig) -> Outcome {
    let list = real_superstable_presets();
    let mut matched = 0;
    for p in &list {
        let c = p.parameter().map_err(err)?;
        let real = RealLineOracle::new(c.re).map_err(err)?;
        let dr = escape_route(&real, config.escape_budget).map_err(err)?;
        let nr = build_nest(&real, &dr, config.budgets).map_err(err)?;
        let puzzle = puzzle_for(c, config).map_err(|e| format!("{}: {e}", p.name))?;
        let geo = GeometricOracle::new(&puzzle).map_err(err)?;
        let dg = escape_route(&geo, config.escape_budget).map_err(|e| format!("{}: {e}", p.name))?;
        let ng = build_nest(&geo, &dg, config.budgets).map_err(|e| format!("{}: {e}", p.name))?;
        if dg != dr || ng != nr {
            return Err(format!("{}: geometric {:?} vs real {:?}", p.name, ng.depths(), nr.depths()));
        }
        matched += 1;
    }
    check(matched >= 20, format!("{matched} real presets agree exactly"))
}

fn criterion_7(config: &RunConfig) -> Outcome {
    let (mut presets_checked, mut cases) = (0, 0);
    for p in presets() {
        let c = p.parameter().map_err(err)?;
        let puzzle = puzzle_for(c, config).map_err(err)?;
        let geo = GeometricOracle::new(&puzzle).map_err(err)?;
        let Some(n) = escape_route(&geo, config.escape_budget).map_err(err)?.n else {
            continue;
        };
        let checks = puzzle.check_qn_pullbacks(n, 64).map_err(|e| format!("{}: {e}", p.name))?;
        if let Some(bad) = checks.iter().find(|c| !c.holds()) {
            return Err(format!("{}: orbit point {} pulls back outside Y0 and Z0", p.name, bad.orbit_index));
        }
        presets_checked += usize::from(!checks.is_empty());
        cases += checks.len();
    }
    check(cases > 0, format!("{cases} pullbacks on {presets_checked} presets, 0 violations"))
}

fn criterion_8(g: &GridParams) -> Outcome {
    let s = series_sweep(&[(0.2, 0.3), (0.5, 0.5), (1.0, 0.25), (0.1, 1.9)], g).map_err(err)?;
    let p = parallel_sweep(&[(1.0, 1.0), (0.5, 1.5), (2.0, 1.0)], g).map_err(err)?;
    sweeps_clean(&[s, p])
}

fn criterion_9(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let c = preset("tripling3").map_err(err)?.parameter().map_err(err)?;
    let r = apriori_report(c, 3, config).map_err(err)?;
    let t = start.elapsed();
    let good = r.levels.len() == 3
        && r.levels
            .iter()
            .all(|l| l.modulus.value > 0.0 && l.modulus.error < 0.1 * l.modulus.value);
    let values: Vec<String> = r.levels.iter().map(|l| l.modulus.to_string()).collect();
    check(
        good && t < Duration::from_secs(600),
        format!("moduli [{}], {t:.2?}{}", values.join(", "), r.truncated.map(|s| format!(", truncated: {s}")).unwrap_or_default()),
    )
}

fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_yoccoz"))
            .args(["verify", "--preset", "airplane"])
            .env_remove("YOCCOZ_CACHE_DIR")
            .output()
            .map_err(err)
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(String::from_utf8_lossy(&a.stderr).into_owned());
    }
    check(a.stdout == b.stdout, format!("{} bytes, identical: {}", a.stdout.len(), a.stdout == b.stdout))
}

fn main() {
    let config = RunConfig::default();
    let g = config.grid;
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("angle oracle", Box::new(criterion_1)),
        ("round annuli and rectangles within 1%", Box::new(criterion_2)),
        ("z^N preimages within 2%", Box::new(move || criterion_3(&g))),
        ("strip bounds", Box::new(move || criterion_4(&g))),
        ("cylinder and factor-16 fixtures", Box::new(move || criterion_5(&g))),
        ("real-line oracle equivalence", Box::new({
            let config = config.clone();
            move || criterion_6(&config)
        })),
        ("qn-pullback containment", Box::new({
            let config = config.clone();
            move || criterion_7(&config)
        })),
        ("series and parallel laws within 2%", Box::new(move || criterion_8(&g))),
        ("a-priori moduli on tripling3", Box::new({
            let config = config.clone();
            move || criterion_9(&config)
        })),
        ("deterministic verify reports", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
