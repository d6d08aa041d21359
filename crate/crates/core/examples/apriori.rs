//! A-priori moduli along the renormalization chain of a multiply tuned
//! real parameter, written as a versioned JSON report.
//!
//!     cargo run --release --example apriori -- tripling3 3

use yoccoz::config::RunConfig;
use yoccoz::presets::preset;
use yoccoz::report::{to_json, Report};
use yoccoz::verify::apriori::{apriori_report, APRIORI_SCHEMA};

fn main() -> yoccoz::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "tripling3".into());
    let levels: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let config = RunConfig::default();
    let report = apriori_report(preset(&name)?.parameter()?, levels, &config)?;
    for l in &report.levels {
        println!(
            "level {}: c = {:.12}, p = {}, mod(E{}, E{}) = {}",
            l.level,
            l.parameter[0],
            l.period,
            l.chi - 1,
            l.chi,
            l.modulus
        );
    }
    println!("mu = {}, floor met: {}", report.mu, report.floor_met);
    if let Some(why) = &report.truncated {
        println!("truncated: {why}");
    }
    let path = std::env::temp_dir().join(format!("{name}_apriori.json"));
    std::fs::write(&path, to_json(&Report::new(APRIORI_SCHEMA, &config, &report))?)?;
    println!("wrote {}", path.display());
    Ok(())
}
