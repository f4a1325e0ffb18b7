// Shared fixtures and a matching oracle that reads geometry straight off the
// row data instead of going through the library's adjacency code.
#![allow(dead_code)]

use qar::region::{build, CellRef, Color, Family, RowRegion};

pub const QUARTERED: [Family; 4] = [Family::Re, Family::Ro, Family::Te, Family::To];

/// Left edge and color of every cell, from the raw rows.
fn layout(region: &RowRegion) -> Vec<(CellRef, i32, Color)> {
    let mut out = Vec::new();
    for (i, row) in region.rows().iter().enumerate() {
        for &c in &row.cells {
            out.push((
                CellRef::new(i + 1, c),
                row.offset_halves + 2 * (c as i32 - 1),
                row.color,
            ));
        }
    }
    out
}

/// Unit cells `[l, l+2]` (half units) in consecutive rows share an edge iff
/// they overlap by exactly one half unit.
fn touch(a: &(CellRef, i32, Color), b: &(CellRef, i32, Color)) -> bool {
    let dr = a.0.row as i64 - b.0.row as i64;
    let overlap = (a.1 + 2).min(b.1 + 2) - a.1.max(b.1);
    dr.abs() == 1 && a.2 != b.2 && overlap == 1
}

/// Neighbor lists by cell index, from spans alone.
pub fn span_graph(region: &RowRegion) -> (Vec<CellRef>, Vec<Vec<usize>>) {
    let cells = layout(region);
    let adj = (0..cells.len())
        .map(|i| {
            (0..cells.len())
                .filter(|&j| touch(&cells[i], &cells[j]))
                .collect()
        })
        .collect();
    (cells.iter().map(|c| c.0).collect(), adj)
}

/// Counts perfect matchings by always covering the first free cell.
pub fn brute_count(region: &RowRegion) -> u64 {
    fn go(used: &mut Vec<bool>, adj: &[Vec<usize>]) -> u64 {
        let Some(i) = used.iter().position(|u| !u) else {
            return 1;
        };
        used[i] = true;
        let mut total = 0;
        for &j in &adj[i] {
            if !used[j] {
                used[j] = true;
                total += go(used, adj);
                used[j] = false;
            }
        }
        used[i] = false;
        total
    }
    let (cells, adj) = span_graph(region);
    go(&mut vec![false; cells.len()], &adj)
}

pub fn tuples(k: usize, n: u32) -> Vec<Vec<u32>> {
    qar::formulas::increasing_tuples(k, n)
}

/// Every quartered region with `k <= max_k`, `k <= n <= max_n` (`k < n` for T), both variants.
pub fn quartered_corpus(max_k: usize, max_n: u32) -> Vec<RowRegion> {
    let mut out = Vec::new();
    for family in QUARTERED {
        for k in 1..=max_k {
            let min_n = if family.is_t() {
                k as u32 + 1
            } else {
                k as u32
            };
            for n in min_n..=max_n {
                for a in tuples(k, n) {
                    for tall in [false, true] {
                        out.push(build(family, k, n, &a, tall).unwrap());
                    }
                }
            }
        }
    }
    out
}

pub fn describe(r: &RowRegion) -> String {
    format!(
        "{}_{{{},{}}}({:?}){}",
        r.family(),
        r.k(),
        r.n(),
        r.a(),
        if r.is_tall() { " tall" } else { "" }
    )
}
