//! Escape route, principal nest and renormalization data for presets,
//! compared with the sign itineraries of the real critical orbit.
//!
//!     cargo run --release --example principal_nest -- airplane tripling3

use yoccoz::config::RunConfig;
use yoccoz::nest::{build_nest, escape_route, RealLineOracle};
use yoccoz::pipeline::analyze;
use yoccoz::presets::preset;

fn main() -> yoccoz::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = vec!["airplane".into(), "tripling3".into()];
    }
    let config = RunConfig::default();
    for name in names {
        let p = preset(&name)?;
        let a = analyze(p.parameter()?, &config)?;
        let d = &a.decoration;
        println!("{name}: q = {}, n = {:?}, satellite = {}", d.q, d.n, d.satellite);
        println!("  depths {:?}", a.nest.depths());
        println!("  return times {:?}", a.nest.return_times());
        println!("  chi = {:?}, p = {:?}, status {:?}", a.nest.chi, a.nest.period, a.nest.status);
        if let Some(c) = p.real_parameter() {
            let real = RealLineOracle::new(c)?;
            let nest = build_nest(&real, &escape_route(&real, config.escape_budget)?, config.budgets)?;
            println!("  real-line oracle agrees: {}", nest == a.nest);
        }
    }
    Ok(())
}
