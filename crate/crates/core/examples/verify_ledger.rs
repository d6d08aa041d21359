//! Modulus ledger of a preset and the covering checks along its nest,
//! followed by one fixture sweep.
//!
//!     cargo run --release --example verify_ledger -- airplane pi-bounds

use yoccoz::config::RunConfig;
use yoccoz::presets::preset;
use yoccoz::verify::ledger_report;
use yoccoz::verify::sweeps::run_check;

fn main() -> yoccoz::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "airplane".into());
    let check = args.next().unwrap_or_else(|| "pi-bounds".into());
    let mut config = RunConfig::default();
    config.apply_override("grid.longest=512")?;

    let report = ledger_report(preset(&name)?.parameter()?, &config)?;
    println!("{name}: nest depths {:?}", report.nest.depths());
    for e in &report.moduli {
        println!("  {:<14} {}", e.name, e.modulus);
    }
    for v in &report.verdicts {
        println!("  {:?} {}: {} vs {} {:?}", v.status, v.name, v.lhs, v.rhs, v.notes);
    }

    let sweep = run_check(&check, &config)?;
    println!("{check}: {} violations", sweep.violations);
    for row in &sweep.rows {
        println!("  {:<24} {} {:?}", row.case, row.computed, row.verdict.status);
    }
    Ok(())
}
