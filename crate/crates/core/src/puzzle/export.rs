//! JSON and SVG output of geometrized piece families.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PieceFamily, Puzzle, PuzzlePiece};
use crate::error::Result;

pub const PUZZLE_SCHEMA: &str = "yoccoz.puzzle.v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceExport {
    pub piece: PuzzlePiece,
    pub boundary: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyExport {
    pub depth: usize,
    pub level: usize,
    pub parent: Vec<Option<usize>>,
    pub image: Vec<Option<usize>>,
    pub pieces: Vec<PieceExport>,
}

pub fn export_family(puzzle: &Puzzle, family: &PieceFamily) -> Result<FamilyExport> {
    let polys = puzzle.geometrize(family)?;
    Ok(FamilyExport {
        depth: family.depth,
        level: family.level,
        parent: family.parent.clone(),
        image: family.image.clone(),
        pieces: family
            .pieces
            .iter()
            .zip(polys)
            .map(|(p, poly)| PieceExport {
                piece: p.clone(),
                boundary: poly.iter().map(|z| [z.re, z.im]).collect(),
            })
            .collect(),
    })
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

/// SVG drawing of closed polygons with labels, in a `size` pixel square.
pub fn svg(shapes: &[(String, Vec<Complex64>)], size: u32) -> String {
    svg_paths(shapes, size, true)
}

/// As [`svg`]; open paths (rays) are stroked only.
pub fn svg_paths(shapes: &[(String, Vec<Complex64>)], size: u32, closed: bool) -> String {
    let pts = shapes.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in pts {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12) * 1.05;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let s = size as f64;
    let px = |z: &Complex64| ((z.re - cx) / span * s + s / 2.0, s / 2.0 - (z.im - cy) / span * s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, (label, poly)) in shapes.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (k, z) in poly.iter().enumerate() {
            let (x, y) = px(z);
            let _ = write!(d, "{}{x:.2},{y:.2} ", if k == 0 { "M" } else { "L" });
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}{}" fill="{}" fill-opacity="0.25" stroke="{color}" stroke-width="1"><title>{label}</title></path>"#,
            if closed { "Z" } else { "" },
            if closed { color } else { "none" },
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn family_svg(puzzle: &Puzzle, family: &PieceFamily, size: u32) -> Result<String> {
    let polys = puzzle.geometrize(family)?;
    let shapes: Vec<(String, Vec<Complex64>)> = family
        .pieces
        .iter()
        .zip(polys)
        .map(|(p, poly)| (p.label.clone(), poly.as_ref().clone()))
        .collect();
    Ok(svg(&shapes, size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_one_path_per_shape() {
        let sq = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
        ];
        let s = svg(&[("a".into(), sq.clone()), ("b".into(), sq)], 100);
        assert_eq!(s.matches("<path").count(), 2);
        assert!(s.starts_with("<svg"));
    }
}
