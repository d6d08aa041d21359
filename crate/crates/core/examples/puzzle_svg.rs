//! Puzzle pieces of the first few depths, as JSON summaries and SVG files.
//!
//!     cargo run --release --example puzzle_svg -- airplane 3

use yoccoz::config::RunConfig;
use yoccoz::pipeline::puzzle_for;
use yoccoz::presets::preset;
use yoccoz::puzzle::export::family_svg;

fn main() -> yoccoz::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "airplane".into());
    let depth: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let c = preset(&name)?.parameter()?;
    let puzzle = puzzle_for(c, &RunConfig::default())?;
    println!("{name}: c = {c}, q = {}", puzzle.q());
    for family in puzzle.families(depth)? {
        let labels: Vec<&str> = family.pieces.iter().map(|p| p.label.as_str()).collect();
        println!("depth {}: {} pieces {labels:?}", family.depth, family.len());
        let crit = family.critical().map(|p| p.label.clone());
        println!("  critical piece: {crit:?}");
        let path = std::env::temp_dir().join(format!("{name}_depth{}.svg", family.depth));
        std::fs::write(&path, family_svg(&puzzle, &family, 600)?)?;
        println!("  wrote {}", path.display());
    }
    let y0 = puzzle.lemma_y0();
    println!("Y0 = {y0}, Z0 = {}", puzzle.lemma_z0());
    Ok(())
}
