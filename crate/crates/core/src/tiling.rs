//! Domino tilings of row regions: a broken-profile counter and a
//! backtracking enumerator that serves as its oracle.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bijection::{Label, LabelAssignment};
use crate::count::BigCount;
use crate::region::{CellRef, Color, RegionError, RowRegion};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TilingError {
    #[error(
        "region has {cells} cells, above the enumeration cap of {cap}; use count_tilings instead"
    )]
    TooManyCells { cells: usize, cap: usize },
    #[error("more than {cap} tilings; use count_tilings instead")]
    TooManyTilings { cap: u64 },
    #[error("enumeration exceeded the time limit of {0:?}")]
    TimeLimit(Duration),
    #[error("invalid tiling: {0}")]
    Invalid(String),
    #[error("invalid label assignment: {0}")]
    Labels(String),
}

/// A domino, stored black cell first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[CellRef; 2]", from = "[CellRef; 2]")]
pub struct Domino {
    pub black: CellRef,
    pub white: CellRef,
}

impl From<Domino> for [CellRef; 2] {
    fn from(d: Domino) -> Self {
        [d.black, d.white]
    }
}

impl From<[CellRef; 2]> for Domino {
    fn from(v: [CellRef; 2]) -> Self {
        Domino {
            black: v[0],
            white: v[1],
        }
    }
}

impl Domino {
    /// The black cell's partner sits in the row above.
    pub fn is_upward(&self) -> bool {
        self.white.row < self.black.row
    }
}

/// A perfect matching of a region's cells, dominoes sorted by black cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tiling {
    dominoes: Vec<Domino>,
}

impl Tiling {
    pub fn new(mut dominoes: Vec<Domino>) -> Self {
        dominoes.sort();
        Tiling { dominoes }
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }

    /// The domino covering the black cell `cell`, if any.
    pub fn domino_at_black(&self, cell: CellRef) -> Option<&Domino> {
        self.dominoes
            .binary_search_by(|d| d.black.cmp(&cell))
            .ok()
            .map(|i| &self.dominoes[i])
    }

    /// Checks that every domino joins adjacent cells of opposite colors with
    /// the black cell first, and that each cell is covered exactly once.
    pub fn validate(&self, region: &RowRegion) -> Result<(), TilingError> {
        let mut seen = BTreeSet::new();
        for d in &self.dominoes {
            if region.color_of(d.black) != Some(Color::Black) {
                return Err(TilingError::Invalid(format!(
                    "{} is not a black cell",
                    d.black
                )));
            }
            if region.color_of(d.white) != Some(Color::White) {
                return Err(TilingError::Invalid(format!(
                    "{} is not a white cell",
                    d.white
                )));
            }
            let adjacent = region
                .adjacency(d.black)
                .map_err(|e| TilingError::Invalid(e.to_string()))?;
            if !adjacent.contains(&d.white) {
                return Err(TilingError::Invalid(format!(
                    "{} and {} are not adjacent",
                    d.black, d.white
                )));
            }
            for c in [d.black, d.white] {
                if !seen.insert(c) {
                    return Err(TilingError::Invalid(format!("{c} is covered twice")));
                }
            }
        }
        if let Some(c) = region.cells().find(|c| !seen.contains(c)) {
            return Err(TilingError::Invalid(format!("{c} is not covered")));
        }
        Ok(())
    }
}

/// Guardrails for the exhaustive enumerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationCap {
    pub max_cells: usize,
    pub max_tilings: u64,
    pub time_limit: Duration,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap {
            max_cells: 400,
            max_tilings: 10_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

const NONE: usize = usize::MAX;

/// Cells of a region indexed in row-major order.
struct Graph {
    cells: Vec<CellRef>,
    colors: Vec<Color>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(region: &RowRegion) -> Graph {
        let cells: Vec<CellRef> = region.cells().collect();
        let index: HashMap<CellRef, usize> =
            cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let colors = cells
            .iter()
            .map(|&c| region.rows()[c.row - 1].color)
            .collect();
        let adj = cells
            .iter()
            .map(|&c| {
                let row = &region.rows()[c.row - 1];
                region
                    .neighbors_unchecked(c.row, row, c.position)
                    .iter()
                    .map(|x| index[x])
                    .collect()
            })
            .collect();
        Graph { cells, colors, adj }
    }

    fn tiling(&self, partner: &[usize]) -> Tiling {
        let dominoes = (0..self.cells.len())
            .filter(|&i| self.colors[i] == Color::Black)
            .map(|i| Domino {
                black: self.cells[i],
                white: self.cells[partner[i]],
            })
            .collect();
        Tiling::new(dominoes)
    }
}

/// Statistics on the branch points met during a search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BranchStats {
    /// Cells where more than one partner survived propagation.
    pub branch_points: usize,
    /// Branch points that were not a two-way choice inside a 2x2 block.
    pub non_block: usize,
}

struct Search<'a> {
    graph: &'a Graph,
    candidates: &'a [Vec<usize>],
    cap: &'a EnumerationCap,
    start: Instant,
    nodes: u64,
    found: Vec<Tiling>,
    stats: BranchStats,
}

impl Search<'_> {
    /// Matches every free cell that has a single free candidate, to a
    /// fixpoint. Returns false when some free cell has no candidate left.
    fn propagate(&self, partner: &mut [usize]) -> bool {
        loop {
            let mut changed = false;
            for i in 0..partner.len() {
                if partner[i] != NONE {
                    continue;
                }
                let mut free = self.candidates[i].iter().filter(|&&j| partner[j] == NONE);
                match (free.next(), free.next()) {
                    (None, _) => return false,
                    (Some(&j), None) => {
                        partner[i] = j;
                        partner[j] = i;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn is_block(&self, partner: &[usize], cell: usize, options: &[usize]) -> bool {
        let [y1, y2] = options else {
            return false;
        };
        (0..partner.len()).any(|z| {
            z != cell
                && partner[z] == NONE
                && self.candidates[z].contains(y1)
                && self.candidates[z].contains(y2)
        })
    }

    fn run(&mut self, mut partner: Vec<usize>) -> Result<(), TilingError> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.start.elapsed() > self.cap.time_limit {
            return Err(TilingError::TimeLimit(self.cap.time_limit));
        }
        if !self.propagate(&mut partner) {
            return Ok(());
        }
        let Some(cell) = partner.iter().position(|&p| p == NONE) else {
            if self.found.len() as u64 >= self.cap.max_tilings {
                return Err(TilingError::TooManyTilings {
                    cap: self.cap.max_tilings,
                });
            }
            self.found.push(self.graph.tiling(&partner));
            return Ok(());
        };
        let options: Vec<usize> = self.candidates[cell]
            .iter()
            .copied()
            .filter(|&j| partner[j] == NONE)
            .collect();
        self.stats.branch_points += 1;
        if !self.is_block(&partner, cell, &options) {
            self.stats.non_block += 1;
        }
        for j in options {
            let mut next = partner.clone();
            next[cell] = j;
            next[j] = cell;
            self.run(next)?;
        }
        Ok(())
    }
}

fn search(
    region: &RowRegion,
    graph: &Graph,
    candidates: &[Vec<usize>],
    cap: &EnumerationCap,
) -> Result<(Vec<Tiling>, BranchStats), TilingError> {
    let cells = graph.cells.len();
    if cells > cap.max_cells {
        return Err(TilingError::TooManyCells {
            cells,
            cap: cap.max_cells,
        });
    }
    if !region.is_balanced() {
        return Ok((Vec::new(), BranchStats::default()));
    }
    let mut s = Search {
        graph,
        candidates,
        cap,
        start: Instant::now(),
        nodes: 0,
        found: Vec::new(),
        stats: BranchStats::default(),
    };
    s.run(vec![NONE; cells])?;
    let mut found = s.found;
    found.sort();
    Ok((found, s.stats))
}

/// All tilings of `region`, in lexicographic order of their domino lists.
pub fn enumerate_tilings(region: &RowRegion) -> Result<Vec<Tiling>, TilingError> {
    enumerate_tilings_with(region, &EnumerationCap::default())
}

pub fn enumerate_tilings_with(
    region: &RowRegion,
    cap: &EnumerationCap,
) -> Result<Vec<Tiling>, TilingError> {
    let graph = Graph::new(region);
    search(region, &graph, &graph.adj, cap).map(|(t, _)| t)
}

/// Tilings in which every black cell labeled `U` is matched upward and every
/// `D` cell downward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedTilings {
    pub tilings: Vec<Tiling>,
    pub branches: BranchStats,
}

pub fn enumerate_constrained(
    region: &RowRegion,
    labels: &LabelAssignment,
) -> Result<ConstrainedTilings, TilingError> {
    enumerate_constrained_with(region, labels, &EnumerationCap::default())
}

pub fn enumerate_constrained_with(
    region: &RowRegion,
    labels: &LabelAssignment,
    cap: &EnumerationCap,
) -> Result<ConstrainedTilings, TilingError> {
    for (&cell, _) in labels.iter() {
        if region.color_of(cell) != Some(Color::Black) {
            return Err(TilingError::Labels(format!("{cell} is not a black cell")));
        }
    }
    let graph = Graph::new(region);
    let allowed = |b: usize, w: usize| -> bool {
        let (black, white) = (graph.cells[b], graph.cells[w]);
        match labels.get(black) {
            Some(Label::U) => white.row < black.row,
            Some(Label::D) => white.row > black.row,
            None => false,
        }
    };
    for (i, &c) in graph.cells.iter().enumerate() {
        if graph.colors[i] == Color::Black && labels.get(c).is_none() {
            return Err(TilingError::Labels(format!("{c} has no label")));
        }
    }
    let candidates: Vec<Vec<usize>> = (0..graph.cells.len())
        .map(|i| {
            graph.adj[i]
                .iter()
                .copied()
                .filter(|&j| match graph.colors[i] {
                    Color::Black => allowed(i, j),
                    Color::White => allowed(j, i),
                })
                .collect()
        })
        .collect();
    let (tilings, branches) = search(region, &graph, &candidates, cap)?;
    Ok(ConstrainedTilings { tilings, branches })
}

/// Number of tilings, by a broken-profile sweep over the cells in row-major
/// order.
///
/// The state after each cell is a pair of masks: the cells of the current row
/// still covered from above, and the cells of the next row already claimed
/// from this one. Bits are cell positions, so the horizontal alignment between
/// rows comes from the span rule rather than from bit shifts.
pub fn count_tilings(region: &RowRegion) -> BigCount {
    if !region.is_balanced() {
        return BigCount::zero();
    }
    let rows = region.rows();
    let mut states: HashMap<u128, BigUint> = HashMap::from([(0, BigUint::one())]);
    for (r, row) in rows.iter().enumerate() {
        let next = rows.get(r + 1).filter(|nr| nr.color != row.color);
        let mut frontier: HashMap<(u128, u128), BigUint> =
            states.drain().map(|(m, v)| ((m, 0), v)).collect();
        for &p in &row.cells {
            let bit = 1u128 << p;
            let down: Vec<u128> = next
                .map(|nr| {
                    nr.touching(row.left_halves(p))
                        .map(|q| 1u128 << q)
                        .collect()
                })
                .unwrap_or_default();
            let mut advanced: HashMap<(u128, u128), BigUint> =
                HashMap::with_capacity(frontier.len() * 2);
            for ((covered, claimed), ways) in frontier {
                if covered & bit != 0 {
                    *advanced.entry((covered & !bit, claimed)).or_default() += ways;
                    continue;
                }
                for &q in &down {
                    if claimed & q == 0 {
                        *advanced.entry((covered, claimed | q)).or_default() += &ways;
                    }
                }
            }
            frontier = advanced;
        }
        states = frontier
            .into_iter()
            .map(|((covered, claimed), ways)| {
                debug_assert_eq!(covered, 0);
                (claimed, ways)
            })
            .collect();
    }
    states.remove(&0).map(BigCount::from).unwrap_or_default()
}

/// Repeatedly matches any cell with exactly one free neighbor, anywhere in
/// the region, and returns what is left together with the forced dominoes.
pub fn propagate_forced(region: &RowRegion) -> Result<(RowRegion, Vec<Domino>), RegionError> {
    let graph = Graph::new(region);
    let mut partner = vec![NONE; graph.cells.len()];
    loop {
        let mut changed = false;
        for i in 0..partner.len() {
            if partner[i] != NONE {
                continue;
            }
            let free: Vec<usize> = graph.adj[i]
                .iter()
                .copied()
                .filter(|&j| partner[j] == NONE)
                .collect();
            match free.as_slice() {
                [] => {
                    let c = graph.cells[i];
                    return Err(RegionError::Untileable {
                        row: c.row,
                        position: c.position,
                    });
                }
                [j] => {
                    partner[i] = *j;
                    partner[*j] = i;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let mut removed = BTreeSet::new();
    let mut dominoes = Vec::new();
    for (i, &j) in partner.iter().enumerate() {
        if j != NONE && graph.colors[i] == Color::Black {
            removed.insert(graph.cells[i]);
            removed.insert(graph.cells[j]);
            dominoes.push(Domino {
                black: graph.cells[i],
                white: graph.cells[j],
            });
        }
    }
    Ok((region.without(&removed), dominoes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{build_re, build_ro, build_te, Row};

    #[test]
    fn empty_region_has_one_tiling() {
        let r = RowRegion::custom(Vec::new()).unwrap();
        assert_eq!(count_tilings(&r), 1u64);
        assert_eq!(
            enumerate_tilings(&r).unwrap(),
            vec![Tiling::new(Vec::new())]
        );
    }

    #[test]
    fn unbalanced_region_has_none() {
        let r = RowRegion::custom(vec![
            Row::new(Color::Black, 0, [1, 2]),
            Row::new(Color::White, -1, [2]),
        ])
        .unwrap();
        assert_eq!(count_tilings(&r), 0u64);
        assert!(enumerate_tilings(&r).unwrap().is_empty());
    }

    #[test]
    fn small_golden_counts() {
        assert_eq!(
            count_tilings(&build_re(2, 2, &[1, 2], false).unwrap()),
            16u64
        );
        assert_eq!(count_tilings(&build_ro(1, 2, &[2], false).unwrap()), 6u64);
        assert_eq!(
            enumerate_tilings(&build_te(1, 2, &[1], false).unwrap())
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let r = build_ro(2, 3, &[1, 3], false).unwrap();
        let all = enumerate_tilings(&r).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for t in &all {
            t.validate(&r).unwrap();
        }
    }

    #[test]
    fn cell_cap_refuses() {
        let r = build_re(2, 5, &[1, 2], false).unwrap();
        let cap = EnumerationCap {
            max_cells: 10,
            ..EnumerationCap::default()
        };
        assert!(matches!(
            enumerate_tilings_with(&r, &cap),
            Err(TilingError::TooManyCells { .. })
        ));
        let cap = EnumerationCap {
            max_tilings: 3,
            ..EnumerationCap::default()
        };
        assert_eq!(
            enumerate_tilings_with(&r, &cap),
            Err(TilingError::TooManyTilings { cap: 3 })
        );
    }

    #[test]
    fn tiling_json_is_pairs() {
        let r = build_re(1, 1, &[1], false).unwrap();
        let t = &enumerate_tilings(&r).unwrap()[0];
        let text = serde_json::to_string(t).unwrap();
        assert!(text.starts_with("[[[1,1],[2,"), "{text}");
        let back: Tiling = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, t);
    }

    #[test]
    fn validate_catches_errors() {
        let r = build_re(1, 2, &[1], false).unwrap();
        let good = enumerate_tilings(&r).unwrap().remove(0);
        let mut ds = good.dominoes().to_vec();
        ds.pop();
        assert!(Tiling::new(ds).validate(&r).is_err());
        let bad = Tiling::new(vec![Domino {
            black: CellRef::new(1, 1),
            white: CellRef::new(2, 3),
        }]);
        assert!(bad.validate(&r).is_err());
    }

    #[test]
    fn full_propagation_eats_bottom_corners() {
        // W_1 cells 1 and 4 of RE_{1,3}(2) each touch a single black cell.
        let r = build_re(1, 3, &[2], false).unwrap();
        let (rest, forced) = propagate_forced(&r).unwrap();
        assert_eq!(forced.len(), 2);
        assert_eq!(rest.cell_count(), 4);
        assert_eq!(count_tilings(&rest), count_tilings(&r));
    }
}
