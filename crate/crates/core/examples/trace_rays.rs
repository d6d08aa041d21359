//! External rays of the basilica landing at alpha, and an equipotential.
//!
//!     cargo run --release --example trace_rays

use yoccoz::dynamics::equipotential;
use yoccoz::dynamics::ray::{trace_to_landing, TraceParams};
use yoccoz::puzzle::export::svg_paths;
use yoccoz::{Angle, QuadraticMap};

fn main() -> yoccoz::Result<()> {
    let map = QuadraticMap::real(-1.0);
    let params = TraceParams::default();
    let mut shapes = Vec::new();
    for s in ["1/3", "2/3", "1/6", "0"] {
        let angle: Angle = s.parse()?;
        let ray = trace_to_landing(&map, &params, &angle);
        println!(
            "ray {angle}: {:?} after {} samples, landing {:?}",
            ray.status,
            ray.points.len(),
            ray.landing
        );
        shapes.push((angle.to_string(), ray.points));
    }
    println!("alpha = {}", map.alpha);
    let eq = equipotential(&map, &params, 0.05, 256)?;
    shapes.push(("equipotential 0.05".into(), eq.samples));
    let path = std::env::temp_dir().join("basilica_rays.svg");
    std::fs::write(&path, svg_paths(&shapes, 600, false))?;
    println!("wrote {}", path.display());
    Ok(())
}
