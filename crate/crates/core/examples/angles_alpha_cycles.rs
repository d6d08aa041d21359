//! Angles of the rays landing at the alpha fixed point for each rotation
//! number p/q, and the combinatorial lengths of puzzle arcs.
//!
//!     cargo run --example angles_alpha_cycles -- 8

use num_integer::Integer;
use yoccoz::angles::combinatorial_length;
use yoccoz::alpha_cycle;

fn main() -> yoccoz::Result<()> {
    let q_max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    for q in 2..=q_max {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            let cycle = alpha_cycle(p, q)?;
            let angles: Vec<String> = cycle.angles.iter().map(|a| a.to_string()).collect();
            println!("{p}/{q}: {}", angles.join(" "));
        }
    }
    println!("shortest arc of a depth-m piece for q = 3:");
    for m in 0..4 {
        println!("  m = {m}: {}", combinatorial_length(0, m, 3));
    }
    Ok(())
}
