//! Symbolic puzzle pieces: cyclically ordered vertices, each carrying the
//! two boundary rays that land there.
//!
//! Going counterclockwise around a piece, the boundary follows the
//! equipotential from ray `b` of one vertex to ray `a` of the next, goes down
//! ray `a` to the vertex and back out along ray `b`. The angles strictly
//! between `a` and `b` (counterclockwise) belong to the part of the plane cut
//! off behind the vertex.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::angles::{Angle, AngleCycle, DyadicVertexLabel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    /// Ray arriving at the vertex from the preceding external arc.
    pub a: Angle,
    /// Ray leaving the vertex towards the next external arc.
    pub b: Angle,
}

impl Vertex {
    pub fn new(a: Angle, b: Angle) -> Self {
        Vertex { a, b }
    }

    /// Counterclockwise length of the gap behind the vertex.
    pub fn gap(&self) -> Angle {
        self.a.ccw_to(&self.b)
    }

    pub fn gap_contains(&self, t: &Angle) -> bool {
        t.in_open_arc(&self.a, &self.b)
    }

    pub fn negated(&self) -> Vertex {
        let h = Angle::half();
        Vertex::new(self.a.add(&h), self.b.add(&h))
    }
}

/// What a vertex is, as far as its angles tell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VertexTag {
    Alpha,
    AlphaPrime,
    Dyadic { label: DyadicVertexLabel },
    /// A deeper preimage of alpha; identified by its ray pair.
    Preimage { depth: usize, a: Angle, b: Angle },
}

/// Where a set of angles sits relative to a piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    Inside,
    /// Behind the vertex with this index.
    Behind(usize),
}

/// A puzzle piece of bidepth `(depth, level)`.
///
/// Equality and hashing only look at the depth and the ray data, so the
/// same piece truncated at two levels compares equal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PuzzlePiece {
    pub depth: usize,
    pub level: usize,
    pub vertices: Vec<Vertex>,
    pub label: String,
}

impl PartialEq for PuzzlePiece {
    fn eq(&self, other: &Self) -> bool {
        self.depth == other.depth && self.vertices == other.vertices
    }
}

impl Eq for PuzzlePiece {}

impl Hash for PuzzlePiece {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.depth.hash(state);
        self.vertices.hash(state);
    }
}

impl fmt::Display for PuzzlePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (bidepth ({}, {})):", self.label, self.depth, self.level)?;
        for v in &self.vertices {
            write!(f, " [{} {}]", v.a, v.b)?;
        }
        Ok(())
    }
}

impl PuzzlePiece {
    /// Builds a piece, putting the vertices in counterclockwise order starting
    /// from the smallest `a`.
    pub fn new(depth: usize, mut vertices: Vec<Vertex>, label: impl Into<String>) -> Self {
        vertices.sort_by(|x, y| x.a.cmp(&y.a));
        PuzzlePiece {
            depth,
            level: depth,
            vertices,
            label: label.into(),
        }
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn bidepth(&self) -> (usize, usize) {
        (self.depth, self.level)
    }

    /// All boundary ray angles, in counterclockwise order.
    pub fn angles(&self) -> Vec<Angle> {
        let mut v = Vec::with_capacity(2 * self.vertices.len());
        for x in &self.vertices {
            v.push(x.a.clone());
            v.push(x.b.clone());
        }
        v.sort();
        v
    }

    /// External arcs `[b_{k-1}, a_k]` as (start, end) pairs.
    pub fn external_arcs(&self) -> Vec<(Angle, Angle)> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let prev = &self.vertices[(k + n - 1) % n];
                (prev.b.clone(), self.vertices[k].a.clone())
            })
            .collect()
    }

    /// True when `t` lies on a closed external arc of the piece.
    pub fn arc_contains(&self, t: &Angle) -> bool {
        !self.vertices.iter().any(|v| v.gap_contains(t))
    }

    /// Index of the vertex whose gap contains `t`, if any.
    pub fn gap_index(&self, t: &Angle) -> Option<usize> {
        self.vertices.iter().position(|v| v.gap_contains(t))
    }

    /// Placement of another piece of at least this depth. Pieces of the
    /// puzzle are nested or have disjoint interiors, so the midpoints of the
    /// external arcs of `other` decide.
    pub fn place(&self, other: &PuzzlePiece) -> Result<Placement> {
        let half = BigRational::new(1.into(), 2.into());
        let mut found: Option<Placement> = None;
        for (s, e) in other.external_arcs() {
            let mid = if s == e {
                s.add(&Angle::half())
            } else {
                s.add(&s.ccw_to(&e).scaled(&half))
            };
            let here = match self.gap_index(&mid) {
                None => Placement::Inside,
                Some(k) => Placement::Behind(k),
            };
            match &found {
                None => found = Some(here),
                Some(f) if *f == here => {}
                Some(_) => {
                    return Err(Error::Internal(format!(
                        "piece {other} crosses the boundary of {self}"
                    )))
                }
            }
        }
        found.ok_or_else(|| Error::Internal(format!("piece {other} has no vertices")))
    }

    /// True when `other`, of at least this depth, is nested inside.
    pub fn contains_piece(&self, other: &PuzzlePiece) -> bool {
        matches!(self.place(other), Ok(Placement::Inside))
    }

    /// The image of the piece under `z -> -z`.
    pub fn negated(&self) -> PuzzlePiece {
        PuzzlePiece::new(
            self.depth,
            self.vertices.iter().map(Vertex::negated).collect(),
            format!("-{}", self.label),
        )
        .with_level(self.level)
    }

    /// Pullback under `f` of a piece containing the critical value: one piece
    /// of twice as many vertices, mapped with degree 2.
    pub fn lift_critical(&self) -> PuzzlePiece {
        let h = Angle::half();
        let mut vs = Vec::with_capacity(2 * self.vertices.len());
        for v in &self.vertices {
            let g = v.gap();
            let [a0, a1] = v.a.halves();
            let g2 = g.scaled(&BigRational::new(1.into(), 2.into()));
            vs.push(Vertex::new(a0.clone(), a0.add(&g2)));
            vs.push(Vertex::new(a1.clone(), a1.add(&g2)));
        }
        debug_assert!(vs.iter().all(|v| v.a != v.a.add(&h)));
        PuzzlePiece::new(self.depth + 1, vs, "").with_level(self.level + 1)
    }

    /// The two univalent pullbacks under `f` of a piece whose critical value
    /// lies behind vertex `limb`.
    pub fn lift_pair(&self, limb: usize) -> [PuzzlePiece; 2] {
        let bj = &self.vertices[limb].b;
        let half = BigRational::new(1.into(), 2.into());
        let make = |shift: Angle| {
            let base = bj.scaled(&half).add(&shift);
            let phi = |t: &Angle| base.add(&bj.ccw_to(t).scaled(&half));
            let vs = self
                .vertices
                .iter()
                .map(|v| Vertex::new(phi(&v.a), phi(&v.b)))
                .collect();
            PuzzlePiece::new(self.depth + 1, vs, "").with_level(self.level + 1)
        };
        [make(Angle::zero()), make(Angle::half())]
    }

    /// `doubling^depth` of every angle lands in `targets`.
    pub fn check_angle_bookkeeping(&self, cycle: &AngleCycle) -> bool {
        self.angles()
            .iter()
            .all(|t| t.preperiod_into(&cycle.angles, self.depth).is_some())
    }

    /// Combinatorial lengths of the external arcs.
    pub fn external_arc_lengths(&self) -> Vec<Angle> {
        self.external_arcs()
            .iter()
            .map(|(s, e)| if s == e && self.vertices.len() == 1 {
                // A single vertex with an empty gap cannot occur; a full arc
                // would have length 1.
                Angle::zero()
            } else {
                s.ccw_to(e)
            })
            .collect()
    }

    /// Tag of vertex `k` relative to the rotation cycle at alpha.
    pub fn vertex_tag(&self, k: usize, cycle: &AngleCycle) -> VertexTag {
        let v = &self.vertices[k];
        if cycle.contains(&v.a) {
            return VertexTag::Alpha;
        }
        if cycle.negated().contains(&v.a) {
            return VertexTag::AlphaPrime;
        }
        let depth = v.a.preperiod_into(&cycle.angles, self.depth).unwrap_or(self.depth);
        VertexTag::Preimage {
            depth,
            a: v.a.clone(),
            b: v.b.clone(),
        }
    }
}

impl PartialOrd for PuzzlePiece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PuzzlePiece {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth, &self.vertices[0].a, self.vertices.len())
            .cmp(&(other.depth, &other.vertices[0].a, other.vertices.len()))
            .then_with(|| self.angles().cmp(&other.angles()))
    }
}

/// Depth-0 pieces: the sectors between consecutive rays of the cycle.
/// Index `i` is `Y0[i]`, the sector `i p` steps after the critical one.
pub fn depth0_sectors(cycle: &AngleCycle) -> Vec<PuzzlePiece> {
    let q = cycle.angles.len();
    let p = cycle.rotation.0 as usize;
    let sector = |j: usize| {
        let lo = cycle.angles[j].clone();
        let hi = cycle.angles[(j + 1) % q].clone();
        (lo.clone(), hi.clone(), lo.ccw_to(&hi))
    };
    // The critical sector carries the longest external arc.
    let j0 = (0..q).max_by(|&x, &y| sector(x).2.cmp(&sector(y).2)).unwrap();
    (0..q)
        .map(|i| {
            let (lo, hi, _) = sector((j0 + i * p) % q);
            PuzzlePiece::new(0, vec![Vertex::new(hi, lo)], format!("Y0[{i}]"))
        })
        .collect()
}
