//! The command line tool: reports, exit codes, determinism and the ray
//! cache.

use std::process::{Command, Output};

use serde_json::Value;

fn yoccoz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yoccoz"))
        .args(args)
        .env_remove("YOCCOZ_CACHE_DIR")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn rays_land_at_alpha() {
    // Near alpha the distance decays like G^{log|2 alpha| / log 2} ~ G^0.31.
    let v = json(&yoccoz(&["rays", "--c", "-1", "--angles", "1/3,2/3", "--level", "1e-9"]));
    assert_eq!(v["schema"], "yoccoz.rays.v1");
    let rays = v["rays"].as_array().unwrap();
    assert_eq!(rays.len(), 2);
    for r in rays {
        let last = r["points"].as_array().unwrap().last().unwrap();
        let z = (last[0].as_f64().unwrap(), last[1].as_f64().unwrap());
        assert!((z.0 + 0.618034).abs() < 0.01 && z.1.abs() < 0.01, "{z:?}");
    }
}

#[test]
fn puzzle_piece_counts() {
    let v = json(&yoccoz(&["puzzle", "--preset", "basilica", "--depth", "2"]));
    let counts: Vec<usize> = v["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["pieces"].as_array().unwrap().len())
        .collect();
    assert_eq!(counts, [2, 3, 5]);
    let v = json(&yoccoz(&["puzzle", "--preset", "rabbit", "--depth", "0"]));
    assert_eq!(v["families"][0]["pieces"].as_array().unwrap().len(), 3);
}

#[test]
fn nest_reports_the_airplane_period() {
    let v = json(&yoccoz(&["nest", "--preset", "airplane"]));
    assert_eq!(v["nest"]["period"], 3);
    assert_eq!(v["nest"]["status"], "renormalizable");
    let v = json(&yoccoz(&["nest", "--preset", "basilica"]));
    assert_eq!(v["nest"]["status"], "satellite");
}

#[test]
fn exit_codes() {
    assert_eq!(yoccoz(&["rays", "--c", "-1", "--angles", "1/0"]).status.code(), Some(2));
    assert_eq!(yoccoz(&["verify", "--preset", "airplane", "--levels", "2", "--check", "series"]).status.code(), Some(2));
    assert_eq!(yoccoz(&["nest", "--c", "-1", "--preset", "airplane"]).status.code(), Some(2));
    assert_eq!(yoccoz(&["verify", "--check", "series", "--set", "eta=3"]).status.code(), Some(2));
    let out = yoccoz(&["presets", "--out", "/nonexistent/dir/presets.json"]);
    assert_eq!(out.status.code(), Some(4));
    let out = yoccoz(&["verify", "--check", "qal", "--set", "grid.max_iterations=1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_with_and_without_the_cache() {
    let args = ["verify", "--preset", "airplane", "--set", "grid.longest=128"];
    let a = yoccoz(&args);
    let b = yoccoz(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    for _ in 0..2 {
        let c = Command::new(env!("CARGO_BIN_EXE_yoccoz"))
            .args(args)
            .env("YOCCOZ_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(a.stdout, c.stdout);
    }
    assert!(dir.path().join("rays.bin").exists());
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "yoccoz.ledger.v1");
    assert_eq!(v["config"]["grid"]["longest"], 128);
}

#[test]
fn config_file_and_reference() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# small grid\ngrid.longest = 64\neta = 0.25\n").unwrap();
    let v = json(&yoccoz(&["verify", "--check", "series", "--config", path.to_str().unwrap()]));
    assert_eq!(v["config"]["eta"], 0.25);
    assert_eq!(v["config"]["grid"]["coarse"], 32);
    assert_eq!(v["violations"], 0);
    let out = yoccoz(&["config-reference"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| `delta0` | `0.1` |"));
}
