//! The inequality ledger: geometric moduli of annuli between nest pieces,
//! the covering transformation rule as a hard check and the composite
//! estimates as soft pattern checks.
//!
//! The theory states these estimates for pseudo-moduli; the ledger uses
//! the ordinary moduli of the same pairs of pieces as stand-ins, so a soft
//! failure is reported but refutes nothing.

pub mod apriori;
pub mod forms;
pub mod sweeps;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::ray::TraceParams;
use crate::error::Result;
use crate::modulus::{annulus_modulus, GridParams, Modulus, PolygonAnnulus};
use crate::config::RunConfig;
use crate::nest::{Decoration, PrincipalNest};
pub use crate::pipeline::{analyze, Analysis};
use crate::puzzle::{Puzzle, PuzzlePiece};

pub use crate::modulus::laws::{InequalityVerdict, Verdict};
pub use apriori::{apriori_report, AprioriLevel, AprioriReport};
pub use forms::{check_covering_form, check_qal_form};

pub const LEDGER_SCHEMA: &str = "yoccoz.ledger.v1";
/// Relative tolerance of the covering factor check.
pub const COVERING_TOLERANCE: f64 = 0.03;
const SOFT: &str = "geometric stand-in for a pseudo-modulus estimate; soft check";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceRef {
    pub label: String,
    pub depth: usize,
    pub level: usize,
}

impl PieceRef {
    fn new(piece: &PuzzlePiece, level: usize) -> Self {
        PieceRef {
            label: piece.label.clone(),
            depth: piece.depth,
            level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub name: String,
    /// Nest level `k` of `mod(E^{k-1} \ E^k)`, if any.
    pub level: Option<usize>,
    pub outer: PieceRef,
    pub inner: Vec<PieceRef>,
    pub modulus: Modulus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub grid: GridParams,
    pub trace: TraceParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusLedger {
    pub parameter: [f64; 2],
    pub entries: Vec<LedgerEntry>,
    pub provenance: Provenance,
}

impl ModulusLedger {
    pub fn get(&self, name: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `mod(E^{k-1} \ E^k)`.
    pub fn nest_modulus(&self, k: usize) -> Option<Modulus> {
        self.get(&nest_entry_name(k)).map(|e| e.modulus)
    }
}

pub fn nest_entry_name(k: usize) -> String {
    format!("mod(E{}, E{k})", k - 1)
}

/// Modulus of the region inside `outer` and outside the `inner` pieces,
/// each truncated at the given level. With `center` (a point of the inner
/// piece) the grid is log-polar around it.
pub fn annulus_between(
    puzzle: &Puzzle,
    outer: (&PuzzlePiece, usize),
    inner: &[(&PuzzlePiece, usize)],
    center: Option<Complex64>,
    grid: &GridParams,
) -> Result<Modulus> {
    let domain = PolygonAnnulus {
        outer: puzzle.polygon(outer.0, outer.1)?,
        inner: inner
            .iter()
            .map(|(p, l)| puzzle.polygon(p, *l))
            .collect::<Result<_>>()?,
        center,
    };
    annulus_modulus(&domain, grid)
}

fn entry(
    puzzle: &Puzzle,
    name: String,
    level: Option<usize>,
    outer: (&PuzzlePiece, usize),
    inner: &[(&PuzzlePiece, usize)],
    center: Option<Complex64>,
    grid: &GridParams,
) -> Result<LedgerEntry> {
    Ok(LedgerEntry {
        modulus: annulus_between(puzzle, outer, inner, center, grid)?,
        name,
        level,
        outer: PieceRef::new(outer.0, outer.1),
        inner: inner.iter().map(|(p, l)| PieceRef::new(p, *l)).collect(),
    })
}

/// `mod(E^{k-1} \ E^k)` with both pieces at their natural truncation.
pub fn nest_annulus(puzzle: &Puzzle, nest: &PrincipalNest, k: usize, grid: &GridParams) -> Result<LedgerEntry> {
    let (d0, d1) = (nest.levels[k - 1].depth, nest.levels[k].depth);
    let outer = puzzle.critical_piece(d0)?.with_label(format!("E{}", k - 1));
    let inner = puzzle.critical_piece(d1)?.with_label(format!("E{k}"));
    entry(
        puzzle,
        nest_entry_name(k),
        Some(k),
        (&outer, d0),
        &[(&inner, d1)],
        Some(Complex64::new(0.0, 0.0)),
        grid,
    )
}

/// `mod(Y0 \ R)` with `R` the union of the pieces `Z1[i]`.
pub fn top_modulus_r(puzzle: &Puzzle, grid: &GridParams) -> Result<LedgerEntry> {
    let depth1 = puzzle.families(1)?.pop().unwrap();
    let r: Vec<&PuzzlePiece> = depth1.pieces.iter().filter(|p| p.label.starts_with("Z1[")).collect();
    let inner: Vec<(&PuzzlePiece, usize)> = r.iter().map(|p| (*p, 1)).collect();
    entry(puzzle, "mod(Y0, R)".into(), None, (&puzzle.lemma_y0(), 0), &inner, None, grid)
}

/// `mod(Z0 \ L)` with `L` the union of the pieces `Y1[i]`.
pub fn top_modulus_l(puzzle: &Puzzle, grid: &GridParams) -> Result<LedgerEntry> {
    let depth1 = puzzle.families(1)?.pop().unwrap();
    let l: Vec<&PuzzlePiece> = depth1.pieces.iter().filter(|p| p.label.starts_with("Y1[")).collect();
    let inner: Vec<(&PuzzlePiece, usize)> = l.iter().map(|p| (*p, 1)).collect();
    entry(puzzle, "mod(Z0, L)".into(), None, (&puzzle.lemma_z0(), 0), &inner, None, grid)
}

/// Top-level moduli and `mod(E^{k-1} \ E^k)` for every level of the nest.
pub fn nest_ledger(puzzle: &Puzzle, nest: &PrincipalNest, grid: &GridParams, trace: &TraceParams) -> Result<ModulusLedger> {
    let mut entries = vec![top_modulus_r(puzzle, grid)?, top_modulus_l(puzzle, grid)?];
    for k in 1..nest.levels.len() {
        entries.push(nest_annulus(puzzle, nest, k, grid)?);
    }
    let c = puzzle.map().c;
    Ok(ModulusLedger {
        parameter: [c.re, c.im],
        entries,
        provenance: Provenance {
            grid: *grid,
            trace: trace.clone(),
        },
    })
}

/// `mod(image) = degree * mod(preimage)` within [`COVERING_TOLERANCE`].
pub fn covering_verdict(name: &str, image: Modulus, preimage: Modulus, degree: u64) -> InequalityVerdict {
    InequalityVerdict::approx(name, image, preimage.scaled(degree as f64), COVERING_TOLERANCE)
        .note(format!("degree {degree}"))
}

/// For each return map `g_k = f^l : E^k -> E^{k-1}` of degree `d`, with
/// `X` the depth-`d_k` piece around the critical value `f^l(0)`:
/// `mod(E^{k-1} \ X) = d mod(E^k \ g_k^{-1} X)`. Then the soft patterns
/// `mod(E^{n-3} \ E^{n-2}) <= 4 mod(E^{n-1} \ E^n)` for odd `n >= 3` and
/// `mod(Y0 \ R) <= 2^{n+1} mod(E^0 \ E^1)` with `n` the escape time.
pub fn check_transformation_chain(
    puzzle: &Puzzle,
    nest: &PrincipalNest,
    ledger: &ModulusLedger,
    grid: &GridParams,
) -> Result<Vec<InequalityVerdict>> {
    let mut out = Vec::new();
    let levels = &nest.levels;
    for k in 1..levels.len() {
        let (d0, d1, l) = (levels[k - 1].depth, levels[k].depth, levels[k].return_time);
        let name = format!("covering factor at level {k}");
        let outer = puzzle.critical_piece(d0)?;
        let x = puzzle.orbit_piece(l, d1)?;
        let image = annulus_between(puzzle, (&outer, d0), &[(&x, d1)], Some(puzzle.orbit_point(l)), grid)?;
        let e = puzzle.critical_piece(d1)?;
        let pre_inner = puzzle.critical_piece(d1 + l)?;
        let pre = annulus_between(
            puzzle,
            (&e, d1),
            &[(&pre_inner, d1 + l)],
            Some(Complex64::new(0.0, 0.0)),
            grid,
        )?;
        out.push(covering_verdict(&name, image, pre, levels[k].degree));
    }
    let missing = Modulus::exact(f64::NAN);
    let mut n = 3;
    while n < levels.len() {
        let name = format!("factor-4 chain at level {n}");
        match (ledger.nest_modulus(n - 2), ledger.nest_modulus(n)) {
            (Some(a), Some(b)) => out.push(InequalityVerdict::le(&name, a, b.scaled(4.0)).note(SOFT)),
            (a, b) => out.push(InequalityVerdict::inconclusive(
                &name,
                a.unwrap_or(missing),
                b.unwrap_or(missing),
                "modulus missing from the ledger",
            )),
        }
        n += 2;
    }
    let name = "top-level estimate";
    match (ledger.get("mod(Y0, R)"), ledger.nest_modulus(1), nest.decoration.n) {
        (Some(top), Some(m1), Some(bold_n)) => {
            let factor = 2f64.powi(bold_n as i32 + 1);
            out.push(
                InequalityVerdict::le(name, top.modulus, m1.scaled(factor))
                    .note(format!("factor 2^(n+1) = {factor}"))
                    .note(SOFT),
            );
        }
        (top, m1, _) => out.push(InequalityVerdict::inconclusive(
            name,
            top.map_or(missing, |e| e.modulus),
            m1.unwrap_or(missing),
            "modulus or escape time missing",
        )),
    }
    Ok(out)
}

/// Ledger plus chain verdicts for one parameter.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerReport {
    pub parameter: [f64; 2],
    pub decoration: Decoration,
    pub nest: PrincipalNest,
    pub moduli: Vec<LedgerEntry>,
    pub verdicts: Vec<InequalityVerdict>,
    pub provenance: Provenance,
}

/// Ledger and chain verdicts for `c`.
pub fn ledger_report(c: Complex64, config: &RunConfig) -> Result<LedgerReport> {
    let a = analyze(c, config)?;
    let ledger = nest_ledger(&a.puzzle, &a.nest, &config.grid, &config.trace)?;
    let verdicts = check_transformation_chain(&a.puzzle, &a.nest, &ledger, &config.grid)?;
    crate::pipeline::save_rays(&a.puzzle)?;
    Ok(LedgerReport {
        parameter: ledger.parameter,
        decoration: a.decoration,
        nest: a.nest,
        moduli: ledger.entries,
        verdicts,
        provenance: ledger.provenance,
    })
}

#[cfg(test)]
mod tests;
