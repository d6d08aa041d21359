//! Yoccoz puzzle pieces of `z^2 + c`: symbolic pieces, their geometry, and
//! pullbacks along orbits.

pub mod export;
pub mod geometry;
pub mod piece;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{AngleCycle, DyadicVertexLabel, Sign};
use crate::dynamics::ray::{TraceParams, Tracer};
use crate::dynamics::rotation::ALPHA_MATCH_TOL;
use crate::dynamics::{critical_period, detect_rotation_number, require_repelling, QuadraticMap};
use crate::error::{Error, Result};

pub use piece::{depth0_sectors, Placement, PuzzlePiece, Vertex, VertexTag};

/// Tolerance on `|f^P(0)|` for treating the critical orbit as periodic.
pub const PERIODIC_TOL: f64 = 1e-8;
/// Longest critical period looked for when none is supplied.
pub const MAX_DETECTED_PERIOD: usize = 4096;

/// Preimage of a piece under `f`.
#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    /// The piece contains the critical value; one pullback of degree 2.
    Critical(PuzzlePiece),
    /// Two univalent pullbacks, symmetric under `z -> -z`.
    Pair([PuzzlePiece; 2]),
}

/// All pieces of one bidepth with their containment and image tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceFamily {
    pub depth: usize,
    pub level: usize,
    pub pieces: Vec<PuzzlePiece>,
    /// Index of the enclosing piece in the previous family.
    pub parent: Vec<Option<usize>>,
    /// Index of `f(piece)` in the previous family.
    pub image: Vec<Option<usize>>,
}

impl PieceFamily {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn find(&self, label: &str) -> Option<&PuzzlePiece> {
        self.pieces.iter().find(|p| p.label == label)
    }

    pub fn critical(&self) -> Option<&PuzzlePiece> {
        self.find(&format!("Y[{}]", self.depth))
    }

    /// The same pieces truncated at another equipotential level.
    pub fn truncated(&self, level: usize) -> PieceFamily {
        let mut f = self.clone();
        f.level = level;
        for p in &mut f.pieces {
            p.level = level;
        }
        f
    }
}

/// Puzzle of one map: traced rays, the critical orbit, and memoized pieces
/// around its points.
pub struct Puzzle {
    pub tracer: Arc<Tracer>,
    pub cycle: AngleCycle,
    /// Period of the critical orbit, when it is (numerically) periodic.
    pub period: Option<usize>,
    depth0: Vec<PuzzlePiece>,
    orbit: Mutex<Vec<Complex64>>,
    memo: Mutex<HashMap<(usize, usize), PuzzlePiece>>,
    polygons: RwLock<HashMap<(PuzzlePiece, usize), Arc<Vec<Complex64>>>>,
}

impl Puzzle {
    /// Puzzle for `map` with the given cycle of rays at alpha, checked by
    /// tracing every ray of the cycle to its landing point.
    pub fn new(map: QuadraticMap, params: TraceParams, cycle: AngleCycle) -> Result<Self> {
        Puzzle::with_tracer(Arc::new(Tracer::new(map, params)), cycle)
    }

    /// As [`Puzzle::new`], reusing the traces already held by `tracer`.
    pub fn with_tracer(tracer: Arc<Tracer>, cycle: AngleCycle) -> Result<Self> {
        let map = tracer.map;
        require_repelling(&map)?;
        for a in &cycle.angles {
            let r = tracer.landed_ray(a)?;
            let l = r.landing.unwrap();
            if (l - map.alpha).norm() > ALPHA_MATCH_TOL {
                return Err(Error::Landing {
                    angle: a.clone(),
                    reason: format!("lands at {l}, not at alpha = {}", map.alpha),
                });
            }
        }
        let period = critical_period(&map, MAX_DETECTED_PERIOD, PERIODIC_TOL);
        Ok(Puzzle {
            tracer,
            depth0: depth0_sectors(&cycle),
            cycle,
            period,
            orbit: Mutex::new(vec![Complex64::new(0.0, 0.0)]),
            memo: Mutex::new(HashMap::new()),
            polygons: RwLock::new(HashMap::new()),
        })
    }

    /// Puzzle with the rotation number found by ray tracing, `q <= q_max`.
    pub fn detect(map: QuadraticMap, params: TraceParams, q_max: u32) -> Result<Self> {
        require_repelling(&map)?;
        let cycle = detect_rotation_number(&map, &params, q_max)?.into_cycle()?;
        Puzzle::new(map, params, cycle)
    }

    pub fn map(&self) -> &QuadraticMap {
        &self.tracer.map
    }

    pub fn q(&self) -> usize {
        self.cycle.angles.len()
    }

    pub fn depth0(&self) -> &[PuzzlePiece] {
        &self.depth0
    }

    fn reduce(&self, j: usize) -> usize {
        match self.period {
            Some(p) => j % p,
            None => j,
        }
    }

    /// `f^j(0)`.
    pub fn orbit_point(&self, j: usize) -> Complex64 {
        let j = self.reduce(j);
        let mut orbit = self.orbit.lock().unwrap();
        while orbit.len() <= j {
            let z = *orbit.last().unwrap();
            orbit.push(self.map().apply(z));
        }
        orbit[j]
    }

    /// Boundary polyline of `piece` truncated at `level`, cached.
    pub fn polygon(&self, piece: &PuzzlePiece, level: usize) -> Result<Arc<Vec<Complex64>>> {
        let key = (piece.clone(), level);
        if let Some(p) = self.polygons.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let poly = Arc::new(geometry::piece_polygon(&self.tracer, piece, level)?);
        self.polygons.write().unwrap().insert(key, poly.clone());
        Ok(poly)
    }

    /// Whether the piece, truncated at `level`, encloses `z`.
    pub fn encloses(&self, piece: &PuzzlePiece, level: usize, z: Complex64) -> Result<bool> {
        geometry::encloses(&self.polygon(piece, level)?, z)
    }

    /// Depth-0 sector containing `z`, located geometrically.
    fn sector_of(&self, z: Complex64) -> Result<PuzzlePiece> {
        let mut hits = Vec::new();
        for p in &self.depth0 {
            if self.encloses(p, 0, z)? {
                hits.push(p.clone());
            }
        }
        match hits.len() {
            1 => Ok(hits.pop().unwrap()),
            0 => Err(Error::Precondition(format!(
                "point {z} lies outside the top equipotential"
            ))),
            _ => Err(Error::Internal(format!("point {z} lies in several sectors"))),
        }
    }

    /// Pullbacks of `piece` under `f`; the critical value is located
    /// exactly from the memoized piece around it.
    pub fn lift(&self, piece: &PuzzlePiece) -> Result<Lift> {
        let value_piece = self.orbit_piece(1, piece.depth)?;
        match piece.place(&value_piece)? {
            Placement::Inside => Ok(Lift::Critical(piece.lift_critical())),
            Placement::Behind(k) => Ok(Lift::Pair(piece.lift_pair(k))),
        }
    }

    /// The depth-`k` piece containing `f^j(0)`.
    pub fn orbit_piece(&self, j: usize, k: usize) -> Result<PuzzlePiece> {
        let j = self.reduce(j);
        if let Some(p) = self.memo.lock().unwrap().get(&(j, k)) {
            return Ok(p.clone());
        }
        let piece = if k == 0 {
            match j {
                0 => self.depth0[0].clone(),
                1 => self.depth0[1 % self.depth0.len()].clone(),
                _ => self.sector_of(self.orbit_point(j))?,
            }
        } else {
            let image = self.orbit_piece(j + 1, k - 1)?;
            match self.lift(&image)? {
                Lift::Critical(p) => p,
                Lift::Pair([a, b]) => {
                    let parent = self.orbit_piece(j, k - 1)?;
                    match (parent.contains_piece(&a), parent.contains_piece(&b)) {
                        (true, false) => a,
                        (false, true) => b,
                        (true, true) => self.choose_geometric([a, b], self.orbit_point(j))?,
                        (false, false) => {
                            return Err(Error::Internal(format!(
                                "neither pullback of {image} lies in {parent}"
                            )))
                        }
                    }
                }
            }
        };
        let label = if j == 0 {
            format!("Y[{k}]")
        } else {
            format!("P[{j},{k}]")
        };
        let piece = piece.with_label(label).with_level(k);
        self.memo.lock().unwrap().insert((j, k), piece.clone());
        Ok(piece)
    }

    /// The pullback enclosing `z`, tested at truncation level 0 (the part
    /// of a piece inside the filled Julia set does not depend on it).
    fn choose_geometric(&self, pair: [PuzzlePiece; 2], z: Complex64) -> Result<PuzzlePiece> {
        let [a, b] = pair;
        if self.encloses(&a, 0, z)? {
            Ok(a)
        } else if self.encloses(&b, 0, z)? {
            Ok(b)
        } else {
            Err(Error::Internal(format!("neither {a} nor {b} encloses {z}")))
        }
    }

    /// The critical piece `Y^k`.
    pub fn critical_piece(&self, k: usize) -> Result<PuzzlePiece> {
        self.orbit_piece(0, k)
    }

    /// Depth-`depth` piece containing an arbitrary point of the filled Julia
    /// set, following its orbit.
    pub fn piece_containing(&self, z: Complex64, depth: usize) -> Result<PuzzlePiece> {
        let mut zs = vec![z];
        for _ in 0..depth {
            zs.push(self.map().apply(*zs.last().unwrap()));
        }
        let mut x = self.sector_of(zs[depth])?;
        for s in (0..depth).rev() {
            x = match self.lift(&x)? {
                Lift::Critical(p) => p,
                Lift::Pair(pair) => self.choose_geometric(pair, zs[s])?,
            };
        }
        Ok(x.with_label(format!("Y[{depth}]@z")))
    }

    /// Pullback of `piece` along `f^k` containing `z`, with its degree (the
    /// product of local degrees, 2 per pass through a critical lift).
    pub fn pullback(&self, piece: &PuzzlePiece, k: usize, z: Complex64) -> Result<(PuzzlePiece, u64)> {
        let mut zs = vec![z];
        for _ in 0..k {
            zs.push(self.map().apply(*zs.last().unwrap()));
        }
        if !self.encloses(piece, piece.level, zs[k])? {
            return Err(Error::Precondition(format!(
                "f^{k}(z) is not inside {}",
                piece.label
            )));
        }
        let mut x = piece.clone();
        let mut degree = 1u64;
        for s in (0..k).rev() {
            x = match self.lift(&x)? {
                Lift::Critical(p) => {
                    degree *= 2;
                    p
                }
                Lift::Pair([a, b]) => {
                    if self.encloses(&a, a.level, zs[s])? {
                        a
                    } else if self.encloses(&b, b.level, zs[s])? {
                        b
                    } else {
                        return Err(Error::Internal(format!(
                            "no pullback encloses the orbit point {}",
                            zs[s]
                        )));
                    }
                }
            };
        }
        let label = format!("f^-{k}({})", piece.label);
        Ok((x.with_label(label), degree))
    }

    /// Lifts `piece` `k` times along the branch whose pullback keeps the
    /// angle `target` (so the result has `target` among its rays); fails on
    /// a critical lift.
    pub fn univalent_pullback_by_angle(
        &self,
        piece: &PuzzlePiece,
        k: usize,
        target: &crate::angles::Angle,
    ) -> Result<PuzzlePiece> {
        let mut x = piece.clone();
        for s in 1..=k {
            let t = target.doubling_n(k - s);
            x = match self.lift(&x)? {
                Lift::Critical(_) => {
                    return Err(Error::Internal(format!(
                        "pullback of {} towards {target} is not univalent",
                        piece.label
                    )))
                }
                Lift::Pair([a, b]) => {
                    if a.angles().contains(&t) {
                        a
                    } else if b.angles().contains(&t) {
                        b
                    } else {
                        return Err(Error::Internal(format!("no pullback carries the ray {t}")));
                    }
                }
            };
        }
        Ok(x)
    }

    /// Depth-0 family truncated at `level`.
    pub fn depth0_family(&self, level: usize) -> PieceFamily {
        let pieces: Vec<PuzzlePiece> = self.depth0.iter().map(|p| p.clone().with_level(level)).collect();
        let n = pieces.len();
        PieceFamily {
            depth: 0,
            level,
            pieces,
            parent: vec![None; n],
            image: vec![None; n],
        }
    }

    /// The family one level deeper, with equipotential level increased by one.
    pub fn refine(&self, family: &PieceFamily) -> Result<PieceFamily> {
        let depth = family.depth + 1;
        let mut pieces = Vec::new();
        let mut image = Vec::new();
        for (i, p) in family.pieces.iter().enumerate() {
            match self.lift(p)? {
                Lift::Critical(x) => {
                    pieces.push(x);
                    image.push(Some(i));
                }
                Lift::Pair([a, b]) => {
                    pieces.push(a);
                    pieces.push(b);
                    image.push(Some(i));
                    image.push(Some(i));
                }
            }
        }
        let parent: Vec<Option<usize>> = pieces
            .iter()
            .map(|x| family.pieces.iter().position(|p| p.contains_piece(x)))
            .collect();
        let critical = self.critical_piece(depth)?;
        let mut fam = PieceFamily {
            depth,
            level: family.level + 1,
            pieces,
            parent,
            image,
        };
        self.label_family(&mut fam, &critical);
        for p in &mut fam.pieces {
            p.level = fam.level;
        }
        Ok(fam)
    }

    fn label_family(&self, fam: &mut PieceFamily, critical: &PuzzlePiece) {
        let depth = fam.depth;
        let q = self.q();
        let mut other = 0;
        for idx in 0..fam.pieces.len() {
            let label = if fam.pieces[idx] == *critical {
                format!("Y[{depth}]")
            } else if depth == 1 {
                // Y1[i] is the non-critical piece at alpha with f(Y1[i]) =
                // Y0[i+1]; Z1[i] is its negative.
                let i = (fam.image[idx].unwrap() + q - 1) % q;
                let at_alpha = fam.pieces[idx]
                    .vertices
                    .iter()
                    .any(|v| self.cycle.contains(&v.a));
                if at_alpha {
                    format!("Y1[{i}]")
                } else {
                    format!("Z1[{i}]")
                }
            } else {
                other += 1;
                format!("Y{depth}[{other}]")
            };
            fam.pieces[idx].label = label;
        }
    }

    /// Families of depths `0..=depth`, each truncated at its own depth.
    pub fn families(&self, depth: usize) -> Result<Vec<PieceFamily>> {
        let mut out = vec![self.depth0_family(0)];
        for _ in 0..depth {
            let next = self.refine(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// Polylines of every piece of a family, traced in parallel.
    pub fn geometrize(&self, family: &PieceFamily) -> Result<Vec<Arc<Vec<Complex64>>>> {
        family
            .pieces
            .par_iter()
            .map(|p| self.polygon(p, family.level))
            .collect()
    }

    /// The unique piece of a geometrized family enclosing `z`.
    pub fn locate(&self, family: &PieceFamily, z: Complex64) -> Result<PuzzlePiece> {
        let g = self.map().green(z);
        let top = self.tracer.params.level(self.tracer.params.index_of_truncation(family.level));
        if g >= top {
            return Err(Error::Precondition(format!(
                "point {z} has potential {g:.6} above the family level {top:.6}"
            )));
        }
        let mut hits = Vec::new();
        for p in &family.pieces {
            if self.encloses(p, family.level, z)? {
                hits.push(p.clone());
            }
        }
        match hits.len() {
            1 => Ok(hits.pop().unwrap()),
            0 => Err(Error::Precondition(format!("no piece encloses {z}"))),
            n => Err(Error::Internal(format!("{n} pieces enclose {z}"))),
        }
    }

    /// The critical sector `Y^0`, labelled for the `qn`-pullback check.
    pub fn lemma_y0(&self) -> PuzzlePiece {
        self.depth0[0].clone().with_label("Y0")
    }

    /// `Z^0 = -Y^0`, of bidepth (1, 0).
    pub fn lemma_z0(&self) -> PuzzlePiece {
        let y = self.lemma_y0();
        PuzzlePiece::new(1, y.vertices.iter().map(Vertex::negated).collect(), "Z0").with_level(0)
    }

    /// Dyadic labels of the vertices of a piece inside `Y^1` that are
    /// `f^{qm}`-preimages of alpha with `m <= max_m`; `None` elsewhere.
    pub fn dyadic_labels(&self, piece: &PuzzlePiece, max_m: usize) -> Result<Vec<Option<DyadicVertexLabel>>> {
        let y1 = self.critical_piece(1)?;
        let q = self.q();
        let at_alpha = y1
            .vertices
            .iter()
            .find(|v| self.cycle.contains(&v.a))
            .ok_or_else(|| Error::Internal("Y^1 has no vertex at alpha".into()))?;
        let at_alpha_prime = y1
            .vertices
            .iter()
            .find(|v| !self.cycle.contains(&v.a))
            .ok_or_else(|| Error::Internal("Y^1 has no vertex at alpha'".into()))?;
        let below = |t: &crate::angles::Angle| t.in_closed_arc(&at_alpha.b, &at_alpha_prime.a);
        let mut out = Vec::new();
        for v in &piece.vertices {
            let depth = v.a.preperiod_into(&self.cycle.angles, piece.depth);
            let label = match depth {
                Some(0) => Some(DyadicVertexLabel::alpha()),
                Some(d) if d.div_ceil(q) <= max_m => {
                    let m = d.div_ceil(q);
                    let signs: Vec<Sign> = (1..m)
                        .map(|l| {
                            if below(&v.a.doubling_n(q * (l - 1))) {
                                Sign::Plus
                            } else {
                                Sign::Minus
                            }
                        })
                        .collect();
                    Some(DyadicVertexLabel::preimage(&signs))
                }
                _ => None,
            };
            out.push(label);
        }
        Ok(out)
    }
}

/// Pullbacks `Q^v` of `P = Y^{(n-1)q+1}` along `f^{nq}`, one attached at
/// each vertex `v` of `P`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatingPieces {
    pub n: usize,
    pub piece: PuzzlePiece,
    pub pieces: Vec<PuzzlePiece>,
    /// Smallest distance between the boundaries of two distinct `Q^v`.
    pub min_distance: f64,
    pub disjoint: bool,
}

/// One pullback of `Z^0` along `f^{qn}` around a point of the critical orbit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PullbackContainment {
    pub orbit_index: usize,
    pub piece: PuzzlePiece,
    pub degree: u64,
    pub in_y0: bool,
    pub in_z0: bool,
}

impl PullbackContainment {
    pub fn holds(&self) -> bool {
        self.in_y0 || self.in_z0
    }
}

impl Puzzle {
    pub fn separating_pieces(&self, n: usize) -> Result<SeparatingPieces> {
        if n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        let q = self.q();
        let p = self.critical_piece((n - 1) * q + 1)?;
        let mut pieces = Vec::new();
        for (i, v) in p.vertices.iter().enumerate() {
            let x = self.univalent_pullback_by_angle(&p, n * q, &v.a)?;
            if !p.contains_piece(&x) || !x.vertices.contains(v) {
                return Err(Error::Internal(format!(
                    "pullback towards {} is not attached at that vertex",
                    v.a
                )));
            }
            pieces.push(x.with_label(format!("Q[{i}]")));
        }
        let polys = pieces
            .par_iter()
            .map(|x| self.polygon(x, x.depth))
            .collect::<Result<Vec<_>>>()?;
        let mut min_distance = f64::INFINITY;
        let mut overlap = false;
        for i in 0..polys.len() {
            for j in 0..polys.len() {
                if i == j {
                    continue;
                }
                for &z in polys[i].iter() {
                    min_distance = min_distance.min(geometry::distance_to_polyline(&polys[j], z));
                    if geometry::winding_number(&polys[j], z) != 0 {
                        overlap = true;
                    }
                }
            }
        }
        let scale = geometry::diameter(&self.polygon(&p, p.depth)?);
        let disjoint = !overlap && min_distance > geometry::BOUNDARY_BAND * scale;
        Ok(SeparatingPieces {
            n,
            piece: p,
            pieces,
            min_distance,
            disjoint,
        })
    }

    /// For every critical orbit point `z` (indices below `horizon`, or one
    /// period) with `f^{qn}(z)` in `Z^0`, the pullback of `Z^0` containing
    /// `z` and whether it lies compactly in `Y^0` or `Z^0`.
    pub fn check_qn_pullbacks(&self, n: usize, horizon: usize) -> Result<Vec<PullbackContainment>> {
        let k = self.q() * n;
        let (y0, z0) = (self.lemma_y0(), self.lemma_z0());
        let y0_poly = self.polygon(&y0, 0)?;
        let z0_poly = self.polygon(&z0, 0)?;
        let count = self.period.unwrap_or(horizon).min(horizon);
        let mut out = Vec::new();
        for j in 0..count {
            if !geometry::encloses(&z0_poly, self.orbit_point(j + k))? {
                continue;
            }
            let (piece, degree) = self.pullback(&z0, k, self.orbit_point(j))?;
            let poly = self.polygon(&piece, piece.level)?;
            out.push(PullbackContainment {
                orbit_index: j,
                in_y0: geometry::compactly_inside(&poly, &y0_poly),
                in_z0: geometry::compactly_inside(&poly, &z0_poly),
                piece,
                degree,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
