//! Text and SVG pictures of regions, tilings and triangles.
//!
//! Positions increase to the right and rows go down the page. In ASCII every
//! cell takes two characters and a half-unit offset is one character, so
//! neighboring cells sit diagonally from each other. In SVG each cell is drawn
//! as a square turned 45 degrees, which is how the lattice actually looks.
//!
//! All output is a pure function of its input.

use std::fmt::Write;

use crate::amt::Amt;
use crate::region::{CellRef, Color, RowRegion};
use crate::tiling::Tiling;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            _ => Err(format!("unknown format `{s}` (expected ascii or svg)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Renderable<'a> {
    Region(&'a RowRegion),
    Tiling(&'a RowRegion, &'a Tiling),
    Amt(&'a Amt),
}

pub fn render(item: Renderable<'_>, format: Format) -> String {
    match (item, format) {
        (Renderable::Region(r), Format::Ascii) => region_ascii(r),
        (Renderable::Region(r), Format::Svg) => region_svg(r),
        (Renderable::Tiling(r, t), Format::Ascii) => tiling_ascii(r, t),
        (Renderable::Tiling(r, t), Format::Svg) => tiling_svg(r, t),
        (Renderable::Amt(a), Format::Ascii) => a.to_string(),
        (Renderable::Amt(a), Format::Svg) => amt_svg(a),
    }
}

/// Leftmost cell edge of any row, in half units.
fn min_left(region: &RowRegion) -> i32 {
    region
        .rows()
        .iter()
        .filter_map(|row| row.cells.first().map(|&p| row.left_halves(p)))
        .min()
        .unwrap_or(0)
}

fn ascii_grid(region: &RowRegion, glyph: impl Fn(CellRef, Color) -> String) -> String {
    let min = min_left(region);
    let mut out = String::new();
    for (i, row) in region.rows().iter().enumerate() {
        let mut line = String::new();
        for &p in &row.cells {
            let col = (row.left_halves(p) - min) as usize;
            while line.len() < col {
                line.push(' ');
            }
            line.push_str(&glyph(CellRef::new(i + 1, p), row.color));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// `##` for black cells and `..` for white ones.
pub fn region_ascii(region: &RowRegion) -> String {
    ascii_grid(region, |_, color| match color {
        Color::Black => "##".into(),
        Color::White => "..".into(),
    })
}

const GLYPHS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Two-character name of the `i`-th domino; names repeat after 3844.
fn glyph_pair(i: usize) -> String {
    let n = GLYPHS.len();
    let i = i % (n * n);
    [GLYPHS[i / n] as char, GLYPHS[i % n] as char]
        .iter()
        .collect()
}

/// Both cells of a domino carry the same two-character name. Cells the
/// tiling leaves uncovered show `??`.
pub fn tiling_ascii(region: &RowRegion, tiling: &Tiling) -> String {
    let names: std::collections::BTreeMap<CellRef, String> = tiling
        .dominoes()
        .iter()
        .enumerate()
        .flat_map(|(i, d)| [(d.black, glyph_pair(i)), (d.white, glyph_pair(i))])
        .collect();
    ascii_grid(region, |cell, _| {
        names.get(&cell).cloned().unwrap_or_else(|| "??".into())
    })
}

const UNIT: f64 = 40.0;
const MARGIN: f64 = 10.0;

struct Frame {
    min_x: f64,
    width: f64,
    height: f64,
}

/// Cell centers in lattice units: half a unit per half-offset and per row.
fn center(region: &RowRegion, cell: CellRef) -> (f64, f64) {
    let row = &region.rows()[cell.row - 1];
    (
        row.left_halves(cell.position) as f64 / 2.0 + 0.5,
        cell.row as f64 / 2.0,
    )
}

fn frame(region: &RowRegion) -> Frame {
    let mut xs = region.cells().map(|c| center(region, c).0).peekable();
    if xs.peek().is_none() {
        return Frame {
            min_x: 0.0,
            width: 2.0 * MARGIN,
            height: 2.0 * MARGIN,
        };
    }
    let (lo, hi) = xs.fold((f64::MAX, f64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let rows = region.rows().len() as f64;
    Frame {
        min_x: lo - 0.5,
        width: (hi - lo + 1.0) * UNIT + 2.0 * MARGIN,
        height: (rows / 2.0 + 0.5) * UNIT + 2.0 * MARGIN,
    }
}

fn px(frame: &Frame, (x, y): (f64, f64)) -> (f64, f64) {
    ((x - frame.min_x) * UNIT + MARGIN, y * UNIT + MARGIN)
}

fn points(frame: &Frame, corners: &[(f64, f64)]) -> String {
    corners
        .iter()
        .map(|&c| {
            let (x, y) = px(frame, c);
            format!("{x:.1},{y:.1}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">\n"
    )
}

fn diamond(c: (f64, f64)) -> [(f64, f64); 4] {
    [
        (c.0, c.1 - 0.5),
        (c.0 + 0.5, c.1),
        (c.0, c.1 + 0.5),
        (c.0 - 0.5, c.1),
    ]
}

pub fn region_svg(region: &RowRegion) -> String {
    let frame = frame(region);
    let mut out = svg_open(frame.width, frame.height);
    for cell in region.cells() {
        let fill = match region.color_of(cell) {
            Some(Color::Black) => "#333333",
            _ => "#ffffff",
        };
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"{fill}\" stroke=\"#000000\" stroke-width=\"1\"/>",
            points(&frame, &diamond(center(region, cell)))
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Dominoes are drawn as single rectangles with the black half marked by a
/// dot; dominoes whose black cell is matched upward get an arrow.
pub fn tiling_svg(region: &RowRegion, tiling: &Tiling) -> String {
    let frame = frame(region);
    let mut out = svg_open(frame.width, frame.height);
    out.push_str(
        "  <defs>\n    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" \
         markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">\n      \
         <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c00000\"/>\n    </marker>\n  </defs>\n",
    );
    for d in tiling.dominoes() {
        let b = center(region, d.black);
        let w = center(region, d.white);
        let (dx, dy) = (w.0 - b.0, w.1 - b.1);
        let corners = [
            (b.0 - dx, b.1),
            (b.0, b.1 - dy),
            (w.0 + dx, w.1),
            (w.0, w.1 + dy),
        ];
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"#e8e8e8\" stroke=\"#000000\" stroke-width=\"1.5\"/>",
            points(&frame, &corners)
        );
        let (cx, cy) = px(&frame, b);
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"4.0\" fill=\"#333333\"/>"
        );
        if d.is_upward() {
            let (x1, y1) = px(&frame, (b.0 + dx * 0.2, b.1 + dy * 0.2));
            let (x2, y2) = px(&frame, (w.0 - dx * 0.2, w.1 - dy * 0.2));
            let _ = writeln!(
                out,
                "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
                 stroke=\"#c00000\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// The full triangle, including the nonpositive entries, as centered text.
pub fn amt_svg(amt: &Amt) -> String {
    let full = amt.full_rows();
    let order = amt.order() as f64;
    let width = order * UNIT + 2.0 * MARGIN;
    let height = order * UNIT * 0.8 + 2.0 * MARGIN;
    let mut out = svg_open(width, height);
    for (i, row) in full.iter().enumerate() {
        let y = MARGIN + (i as f64 + 0.6) * UNIT * 0.8;
        let start = (order - row.len() as f64) / 2.0;
        for (j, v) in row.iter().enumerate() {
            let x = MARGIN + (start + j as f64 + 0.5) * UNIT;
            let weight = if *v > 0 { "bold" } else { "normal" };
            let _ = writeln!(
                out,
                "  <text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" font-family=\"monospace\" \
                 font-size=\"16\" font-weight=\"{weight}\">{v}</text>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::build_re;
    use crate::tiling::enumerate_tilings;

    #[test]
    fn region_ascii_shifts_white_row() {
        let r = build_re(1, 3, &[2], false).unwrap();
        assert_eq!(region_ascii(&r), " ######\n........\n   ##\n");
    }

    #[test]
    fn tiling_ascii_names_each_domino_twice() {
        let r = build_re(2, 3, &[1, 3], false).unwrap();
        for t in enumerate_tilings(&r).unwrap() {
            let pic = tiling_ascii(&r, &t);
            let cells: Vec<String> = pic
                .lines()
                .flat_map(|l| {
                    l.trim_start()
                        .as_bytes()
                        .chunks(2)
                        .map(|c| String::from_utf8_lossy(c).trim().to_string())
                        .collect::<Vec<_>>()
                })
                .collect();
            for i in 0..t.len() {
                let g = glyph_pair(i);
                assert_eq!(cells.iter().filter(|c| **c == g).count(), 2, "{pic}");
            }
        }
    }

    #[test]
    fn svg_is_deterministic_and_marks_upward() {
        let r = build_re(1, 2, &[1], false).unwrap();
        let tilings = enumerate_tilings(&r).unwrap();
        let a = tiling_svg(&r, &tilings[0]);
        assert_eq!(a, tiling_svg(&r, &tilings[0]));
        assert!(a.starts_with("<?xml"));
        assert_eq!(a.matches("<polygon").count(), tilings[0].len());
        let ups = tilings[0]
            .dominoes()
            .iter()
            .filter(|d| d.is_upward())
            .count();
        assert_eq!(a.matches("<line").count(), ups);
        assert_eq!(region_svg(&r).matches("<polygon").count(), r.cell_count());
    }

    #[test]
    fn amt_text() {
        let a = Amt::new(3, vec![vec![], vec![1], vec![2]]).unwrap();
        assert_eq!(render(Renderable::Amt(&a), Format::Ascii), a.to_string());
        assert_eq!(amt_svg(&a).matches("<text").count(), 6);
    }
}
