//! Parameter to puzzle, escape route and principal nest, with the ray
//! cache named by `YOCCOZ_CACHE_DIR` when it is set.

use std::sync::Arc;

use num_complex::Complex64;

use crate::config::RunConfig;
use crate::dynamics::cache::{cache_dir_from_env, RayCache};
use crate::dynamics::{detect_rotation_number, QuadraticMap, Tracer};
use crate::error::Result;
use crate::nest::{build_nest, escape_route, Decoration, GeometricOracle, PrincipalNest};
use crate::puzzle::Puzzle;

/// Puzzle of `c` with the detected rotation number, seeded from the ray
/// cache.
pub fn puzzle_for(c: Complex64, config: &RunConfig) -> Result<Puzzle> {
    let map = QuadraticMap::new(c);
    let cycle = detect_rotation_number(&map, &config.trace, config.q_max)?.into_cycle()?;
    let tracer = Arc::new(Tracer::new(map, config.trace.clone()));
    if let Some(dir) = cache_dir_from_env() {
        for t in RayCache::open(dir)?.load(&map, &config.trace)? {
            tracer.insert(t);
        }
    }
    Puzzle::with_tracer(tracer, cycle)
}

/// Appends the rays traced so far to the cache, if one is configured.
pub fn save_rays(puzzle: &Puzzle) -> Result<()> {
    let Some(dir) = cache_dir_from_env() else {
        return Ok(());
    };
    let traces: Vec<_> = puzzle.tracer.cached().iter().map(|t| (**t).clone()).collect();
    RayCache::open(dir)?.store(puzzle.map(), &puzzle.tracer.params, &traces)
}

/// Puzzle, escape route and nest of one parameter.
pub struct Analysis {
    pub puzzle: Puzzle,
    pub decoration: Decoration,
    pub nest: PrincipalNest,
}

pub fn analyze(c: Complex64, config: &RunConfig) -> Result<Analysis> {
    let puzzle = puzzle_for(c, config)?;
    let oracle = GeometricOracle::new(&puzzle)?;
    let decoration = escape_route(&oracle, config.escape_budget)?;
    let nest = build_nest(&oracle, &decoration, config.budgets)?;
    drop(oracle);
    save_rays(&puzzle)?;
    Ok(Analysis {
        puzzle,
        decoration,
        nest,
    })
}
