//! Row-structured lattice regions and the quartered Aztec rectangle families.
//!
//! Every region is drawn in the frame rotated by 45 degrees, where cells of a
//! single color line up in horizontal rows. Row `r` has a horizontal offset in
//! half-cell units and a set of occupied positions; the cell at position `c`
//! spans `[offset + c - 1, offset + c]`. Two cells in consecutive rows touch
//! along an edge exactly when their spans overlap by half a cell.
//!
//! Rows and positions are both 1-based, counted from the top and from the
//! left.
//!
//! The quartered families are laid out as follows (`B` rows are black with
//! `n` cells at offset 0, `W` rows are white):
//!
//! | family | short variant (rows top to bottom)                          | tall variant prepends        |
//! |--------|-------------------------------------------------------------|------------------------------|
//! | RE     | `B_1 W_1 B_2 ... W_{2k-1} B_{2k}`, `B_{2k} = {a}`           | `B_0`, `W_0` (n, +1/2)       |
//! | RO     | `B_1 W_1 B_2 ... W_{2k} B_{2k+1}`, `B_{2k+1} = {a}`         | `B_0`, `W_0` (n, +1/2)       |
//! | TE     | `W_1 B_1 W_2 ... W_{2k} B_{2k}`, `B_{2k} = [n] \ a`         | `W_0` (n, -1/2), `B_0`       |
//! | TO     | `W_1 B_1 W_2 ... W_{2k-1} B_{2k-1}`, `B_{2k-1} = [n] \ a`   | `W_0` (n, -1/2), `B_0`       |
//!
//! In the R families, odd white rows hold `n + 1` cells at offset -1/2 and even
//! ones `n` cells at +1/2. In the T families, odd white rows hold `n - 1` cells
//! at +1/2 and even ones `n` cells at -1/2.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest usable cell position; frontier masks are 128 bits wide.
pub const MAX_POSITION: u32 = 127;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "RE")]
    Re,
    #[serde(rename = "RO")]
    Ro,
    #[serde(rename = "TE")]
    Te,
    #[serde(rename = "TO")]
    To,
    #[serde(rename = "custom")]
    Custom,
}

impl Family {
    /// True for the two families whose bottom row keeps only the `a` cells.
    pub fn is_r(self) -> bool {
        matches!(self, Family::Re | Family::Ro)
    }

    pub fn is_t(self) -> bool {
        matches!(self, Family::Te | Family::To)
    }

    /// Order of the monotone triangles attached to a family with `k` parameters.
    pub fn amt_order(self, k: usize) -> Option<usize> {
        match self {
            Family::Re | Family::To => Some(2 * k),
            Family::Ro | Family::Te => Some(2 * k + 1),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Re => "RE",
            Family::Ro => "RO",
            Family::Te => "TE",
            Family::To => "TO",
            Family::Custom => "custom",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = RegionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "re" => Ok(Family::Re),
            "ro" => Ok(Family::Ro),
            "te" => Ok(Family::Te),
            "to" => Ok(Family::To),
            "custom" => Ok(Family::Custom),
            _ => Err(RegionError::Parameter(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("invalid region parameters: {0}")]
    Parameter(String),
    #[error("malformed region: {0}")]
    Malformed(String),
    #[error("cell ({row}, {position}) is not occupied")]
    Lookup { row: usize, position: u32 },
    #[error("region cannot be tiled: cell ({row}, {position}) has no free neighbor")]
    Untileable { row: usize, position: u32 },
}

/// A reference to an occupied cell: 1-based row from the top, 1-based position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct CellRef {
    pub row: usize,
    pub position: u32,
}

impl CellRef {
    pub fn new(row: usize, position: u32) -> Self {
        CellRef { row, position }
    }
}

impl From<CellRef> for [u32; 2] {
    fn from(c: CellRef) -> Self {
        [c.row as u32, c.position]
    }
}

impl TryFrom<[u32; 2]> for CellRef {
    type Error = String;

    fn try_from(v: [u32; 2]) -> Result<Self, Self::Error> {
        if v[0] == 0 || v[1] == 0 {
            return Err(format!("cell [{}, {}] is not 1-based", v[0], v[1]));
        }
        Ok(CellRef::new(v[0] as usize, v[1]))
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Row {
    pub color: Color,
    /// Twice the horizontal offset, so half-cell shifts stay integral.
    pub offset_halves: i32,
    pub cells: BTreeSet<u32>,
}

impl Row {
    pub fn new(color: Color, offset_halves: i32, cells: impl IntoIterator<Item = u32>) -> Self {
        Row {
            color,
            offset_halves,
            cells: cells.into_iter().collect(),
        }
    }

    fn full(color: Color, offset_halves: i32, len: u32) -> Self {
        Row::new(color, offset_halves, 1..=len)
    }

    /// Left edge of the cell at `position`, in half-cell units.
    pub fn left_halves(&self, position: u32) -> i32 {
        self.offset_halves + 2 * (position as i32 - 1)
    }

    /// Positions in this row whose span overlaps the span starting at
    /// `left_halves` by exactly half a cell.
    pub fn touching(&self, left_halves: i32) -> impl Iterator<Item = u32> + '_ {
        [left_halves - 1, left_halves + 1]
            .into_iter()
            .filter_map(move |l| {
                let twice = l - self.offset_halves;
                if twice.rem_euclid(2) != 0 {
                    return None;
                }
                let p = twice / 2 + 1;
                (p >= 1 && self.cells.contains(&(p as u32))).then_some(p as u32)
            })
    }
}

/// A region built from rows of unit cells, together with the parameters it
/// was built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRegion")]
pub struct RowRegion {
    family: Family,
    k: usize,
    n: u32,
    a: Vec<u32>,
    #[serde(default)]
    tall: bool,
    rows: Vec<Row>,
}

#[derive(Deserialize)]
struct RawRegion {
    family: Family,
    k: usize,
    n: u32,
    a: Vec<u32>,
    #[serde(default)]
    tall: bool,
    rows: Vec<Row>,
}

impl TryFrom<RawRegion> for RowRegion {
    type Error = RegionError;

    fn try_from(raw: RawRegion) -> Result<Self, Self::Error> {
        let region = RowRegion {
            family: raw.family,
            k: raw.k,
            n: raw.n,
            a: raw.a,
            tall: raw.tall,
            rows: raw.rows,
        };
        region.check_rows()?;
        Ok(region)
    }
}

impl RowRegion {
    /// A free-form region. Only row shape is checked; color balance is not
    /// required, so unbalanced fixtures simply have no tilings.
    pub fn custom(rows: Vec<Row>) -> Result<Self, RegionError> {
        let region = RowRegion {
            family: Family::Custom,
            k: 0,
            n: 0,
            a: Vec::new(),
            tall: false,
            rows,
        };
        region.check_rows()?;
        Ok(region)
    }

    fn check_rows(&self) -> Result<(), RegionError> {
        for (i, pair) in self.rows.windows(2).enumerate() {
            if pair[0].color == pair[1].color {
                return Err(RegionError::Malformed(format!(
                    "rows {} and {} have the same color",
                    i + 1,
                    i + 2
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(&p) = row.cells.iter().find(|&&p| p == 0 || p > MAX_POSITION) {
                return Err(RegionError::Malformed(format!(
                    "row {} has position {p} outside 1..={MAX_POSITION}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn is_tall(&self) -> bool {
        self.tall
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> Option<&Row> {
        index.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    pub fn is_occupied(&self, cell: CellRef) -> bool {
        self.row(cell.row)
            .is_some_and(|r| r.cells.contains(&cell.position))
    }

    pub fn color_of(&self, cell: CellRef) -> Option<Color> {
        self.is_occupied(cell)
            .then(|| self.rows[cell.row - 1].color)
    }

    /// All occupied cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.cells.iter().map(move |&p| CellRef::new(i + 1, p)))
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }

    pub fn count_color(&self, color: Color) -> usize {
        self.rows
            .iter()
            .filter(|r| r.color == color)
            .map(|r| r.cells.len())
            .sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.count_color(Color::Black) == self.count_color(Color::White)
    }

    /// 1-based indices of the black rows, top to bottom.
    pub fn black_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.color == Color::Black)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Occupied edge-neighbors of `cell`, sorted by (row, position).
    pub fn adjacency(&self, cell: CellRef) -> Result<Vec<CellRef>, RegionError> {
        let row = self
            .row(cell.row)
            .filter(|r| r.cells.contains(&cell.position));
        let row = row.ok_or(RegionError::Lookup {
            row: cell.row,
            position: cell.position,
        })?;
        Ok(self.neighbors_unchecked(cell.row, row, cell.position))
    }

    pub(crate) fn neighbors_unchecked(&self, r: usize, row: &Row, position: u32) -> Vec<CellRef> {
        let left = row.left_halves(position);
        let mut out = Vec::with_capacity(4);
        for other in [r - 1, r + 1] {
            let Some(other_row) = self.row(other) else {
                continue;
            };
            if other_row.color == row.color {
                continue;
            }
            out.extend(other_row.touching(left).map(|p| CellRef::new(other, p)));
        }
        out.sort();
        out
    }

    /// Same rows, ignoring the parameters the region was built from.
    pub fn same_shape(&self, other: &RowRegion) -> bool {
        self.rows == other.rows
    }

    /// The left-right mirror image; positions map to `L + 1 - c` where `L` is
    /// the largest occupied position.
    pub fn mirrored(&self) -> RowRegion {
        let width = self
            .rows
            .iter()
            .filter_map(|r| r.cells.last().copied())
            .max()
            .unwrap_or(0);
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                color: r.color,
                offset_halves: -r.offset_halves,
                cells: r.cells.iter().map(|&c| width + 1 - c).collect(),
            })
            .collect();
        RowRegion {
            family: Family::Custom,
            k: 0,
            n: 0,
            a: Vec::new(),
            tall: false,
            rows,
        }
    }

    /// Copy of the region with the cells in `removed` deleted and empty rows
    /// dropped. Parameters are kept.
    pub(crate) fn without(&self, removed: &BTreeSet<CellRef>) -> RowRegion {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| Row {
                color: row.color,
                offset_halves: row.offset_halves,
                cells: row
                    .cells
                    .iter()
                    .copied()
                    .filter(|&p| !removed.contains(&CellRef::new(i + 1, p)))
                    .collect(),
            })
            .filter(|row| !row.cells.is_empty())
            .collect();
        RowRegion {
            rows,
            ..self.clone()
        }
    }
}

fn check_params(k: usize, n: u32, a: &[u32]) -> Result<(), RegionError> {
    if k == 0 {
        return Err(RegionError::Parameter("k must be positive".into()));
    }
    if n == 0 || n >= MAX_POSITION {
        return Err(RegionError::Parameter(format!(
            "n must lie in 1..{MAX_POSITION}, got {n}"
        )));
    }
    if a.len() != k {
        return Err(RegionError::Parameter(format!(
            "expected {k} entries in a, got {}",
            a.len()
        )));
    }
    if a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RegionError::Parameter(format!(
            "a must be strictly increasing: {a:?}"
        )));
    }
    if a.iter().any(|&x| x == 0 || x > n) {
        return Err(RegionError::Parameter(format!(
            "entries of a must lie in 1..={n}: {a:?}"
        )));
    }
    Ok(())
}

fn r_family(
    family: Family,
    k: usize,
    n: u32,
    a: &[u32],
    tall: bool,
) -> Result<RowRegion, RegionError> {
    check_params(k, n, a)?;
    let black_rows = match family {
        Family::Re => 2 * k,
        _ => 2 * k + 1,
    };
    let mut rows = Vec::with_capacity(2 * black_rows + 1);
    if tall {
        rows.push(Row::full(Color::Black, 0, n));
        rows.push(Row::full(Color::White, 1, n));
    }
    for i in 1..=black_rows {
        if i == black_rows {
            rows.push(Row::new(Color::Black, 0, a.iter().copied()));
        } else {
            rows.push(Row::full(Color::Black, 0, n));
            rows.push(if i % 2 == 1 {
                Row::full(Color::White, -1, n + 1)
            } else {
                Row::full(Color::White, 1, n)
            });
        }
    }
    Ok(RowRegion {
        family,
        k,
        n,
        a: a.to_vec(),
        tall,
        rows,
    })
}

fn t_family(
    family: Family,
    k: usize,
    n: u32,
    a: &[u32],
    tall: bool,
) -> Result<RowRegion, RegionError> {
    check_params(k, n, a)?;
    // With k = n the bottom row would be empty.
    if k as u32 >= n {
        return Err(RegionError::Parameter(format!(
            "{family} regions need k < n, got k={k}, n={n}"
        )));
    }
    let black_rows = match family {
        Family::Te => 2 * k,
        _ => 2 * k - 1,
    };
    let mut rows = Vec::with_capacity(2 * black_rows + 2);
    if tall {
        rows.push(Row::full(Color::White, -1, n));
        rows.push(Row::full(Color::Black, 0, n));
    }
    for i in 1..=black_rows {
        rows.push(if i % 2 == 1 {
            Row::full(Color::White, 1, n - 1)
        } else {
            Row::full(Color::White, -1, n)
        });
        if i == black_rows {
            rows.push(Row::new(
                Color::Black,
                0,
                (1..=n).filter(|p| !a.contains(p)),
            ));
        } else {
            rows.push(Row::full(Color::Black, 0, n));
        }
    }
    Ok(RowRegion {
        family,
        k,
        n,
        a: a.to_vec(),
        tall,
        rows,
    })
}

/// `RE_{2k-1,n}(a)`, or `RE_{2k,n}(a)` when `tall`.
pub fn build_re(k: usize, n: u32, a: &[u32], tall: bool) -> Result<RowRegion, RegionError> {
    r_family(Family::Re, k, n, a, tall)
}

/// `RO_{2k,n}(a)`, or `RO_{2k+1,n}(a)` when `tall`.
pub fn build_ro(k: usize, n: u32, a: &[u32], tall: bool) -> Result<RowRegion, RegionError> {
    r_family(Family::Ro, k, n, a, tall)
}

/// `TE_{2k,n}(a)`, or `TE_{2k+1,n}(a)` when `tall`.
pub fn build_te(k: usize, n: u32, a: &[u32], tall: bool) -> Result<RowRegion, RegionError> {
    t_family(Family::Te, k, n, a, tall)
}

/// `TO_{2k-1,n}(a)`, or `TO_{2k,n}(a)` when `tall`.
pub fn build_to(k: usize, n: u32, a: &[u32], tall: bool) -> Result<RowRegion, RegionError> {
    t_family(Family::To, k, n, a, tall)
}

pub fn build(
    family: Family,
    k: usize,
    n: u32,
    a: &[u32],
    tall: bool,
) -> Result<RowRegion, RegionError> {
    match family {
        Family::Re => build_re(k, n, a, tall),
        Family::Ro => build_ro(k, n, a, tall),
        Family::Te => build_te(k, n, a, tall),
        Family::To => build_to(k, n, a, tall),
        Family::Custom => Err(RegionError::Parameter(
            "custom regions have no builder".into(),
        )),
    }
}

/// The three quarter shapes cut from an Aztec diamond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuarterVariant {
    R,
    Ka,
    Kna,
}

impl std::str::FromStr for QuarterVariant {
    type Err = RegionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(QuarterVariant::R),
            "ka" | "k_a" => Ok(QuarterVariant::Ka),
            "kna" | "k_na" => Ok(QuarterVariant::Kna),
            _ => Err(RegionError::Parameter(format!("unknown variant `{s}`"))),
        }
    }
}

/// Quarter of the Aztec diamond of the given order, realized as a quartered
/// Aztec rectangle with `m = n`.
///
/// Even order `2h` uses `m = n = h`; odd order `2h + 1` uses `m = n = h + 1`.
/// `m` fixes both the family's row count and whether the tall variant is used.
///
/// | variant | even order          | odd order           |
/// |---------|---------------------|---------------------|
/// | `R`     | RE, `a_i = 2i - 1`  | TO, `a_i = 2i - 1`  |
/// | `Ka`    | RO, `a_i = 2i - 1`  | TE, `a_i = 2i - 1`  |
/// | `Kna`   | RO, `a_i = 2i`      | TE, `a_i = 2i`      |
///
/// Orders where the chosen family would need an empty `a` are rejected.
pub fn quartered_aztec_diamond(
    order: u32,
    variant: QuarterVariant,
) -> Result<RowRegion, RegionError> {
    if order < 2 {
        return Err(RegionError::Parameter(format!(
            "quartered Aztec diamonds need order >= 2, got {order}"
        )));
    }
    let (family, m) = match (order.is_multiple_of(2), variant) {
        (true, QuarterVariant::R) => (Family::Re, order / 2),
        (true, _) => (Family::Ro, order / 2),
        (false, QuarterVariant::R) => (Family::To, order / 2 + 1),
        (false, _) => (Family::Te, order / 2 + 1),
    };
    // Number of `a` entries of X_{m,n} and whether m selects the tall variant.
    let (k, tall) = match family {
        Family::Re => (m.div_ceil(2), m % 2 == 0),
        Family::Ro => (m / 2, m % 2 == 1),
        Family::Te => (m / 2, m % 2 == 1),
        _ => (m.div_ceil(2), m % 2 == 0),
    };
    let a: Vec<u32> = (1..=k)
        .map(|i| match variant {
            QuarterVariant::Kna => 2 * i,
            _ => 2 * i - 1,
        })
        .collect();
    build(family, k as usize, m, &a, tall)
}

/// The Aztec diamond of the given order: `order + 1` black rows of `order`
/// cells alternating with white rows of `order + 1` cells at offset -1/2.
pub fn aztec_diamond(order: u32) -> Result<RowRegion, RegionError> {
    let mut rows = Vec::new();
    for i in 0..=order {
        rows.push(Row::full(Color::Black, 0, order));
        if i < order {
            rows.push(Row::full(Color::White, -1, order + 1));
        }
    }
    RowRegion::custom(rows)
}

/// Strips forced dominoes off the top of a region.
///
/// While every cell of the topmost row is forced, that is, the cascade of
/// cells with a single free neighbor resolves the whole row, the forced
/// dominoes are removed. Rows that become empty are dropped. The first row
/// that is not entirely forced stops the peel, so forced cells further down
/// are left alone. The peel also stops rather than remove the last black
/// cells: a region with a single tiling (such as `TO_{1,n}(a)`) keeps its
/// bottom rows instead of vanishing.
pub fn peel_forced(
    region: &RowRegion,
) -> Result<(RowRegion, Vec<(CellRef, CellRef)>), RegionError> {
    let mut current = region.clone();
    let mut removed = Vec::new();
    while let Some(top) = current.rows.first() {
        let top_cells: Vec<u32> = top.cells.iter().copied().collect();
        let mut used: BTreeSet<CellRef> = BTreeSet::new();
        let mut pairs = Vec::new();
        let mut progress = true;
        while progress {
            progress = false;
            for &p in &top_cells {
                let cell = CellRef::new(1, p);
                if used.contains(&cell) {
                    continue;
                }
                let free: Vec<CellRef> = current
                    .neighbors_unchecked(1, top, p)
                    .into_iter()
                    .filter(|c| !used.contains(c))
                    .collect();
                match free.as_slice() {
                    [] => {
                        return Err(RegionError::Untileable {
                            row: 1,
                            position: p,
                        })
                    }
                    [only] => {
                        used.insert(cell);
                        used.insert(*only);
                        pairs.push((cell, *only));
                        progress = true;
                    }
                    _ => {}
                }
            }
        }
        if pairs.len() != top_cells.len() {
            break;
        }
        // Report pairs in the coordinates of the original region.
        let next = current.without(&used);
        if next.count_color(Color::Black) == 0 {
            break;
        }
        let shift = region.rows.len() - current.rows.len();
        removed.extend(pairs.iter().map(|&(x, y)| {
            (
                CellRef::new(x.row + shift, x.position),
                CellRef::new(y.row + shift, y.position),
            )
        }));
        // Only rows 1 and 2 lose cells and row 1 always empties, so the
        // dropped rows are leading rows.
        current = next;
    }
    if current.tall && current.rows.len() < region.rows.len() {
        current.tall = false;
    }
    Ok((current, removed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(r: &RowRegion) -> Vec<usize> {
        r.rows().iter().map(|row| row.cells.len()).collect()
    }

    #[test]
    fn re_small_table() {
        let r = build_re(1, 3, &[2], false).unwrap();
        assert_eq!(counts(&r), vec![3, 4, 1]);
        assert_eq!(r.rows()[1].offset_halves, -1);
        assert_eq!(r.rows()[2].cells, BTreeSet::from([2]));
        assert_eq!(r.count_color(Color::Black), 4);
        assert!(r.is_balanced());

        let r = build_re(2, 2, &[1, 2], false).unwrap();
        assert_eq!(counts(&r), vec![2, 3, 2, 2, 2, 3, 2]);
    }

    #[test]
    fn ro_and_t_tables() {
        assert_eq!(
            counts(&build_ro(1, 2, &[1], false).unwrap()),
            vec![2, 3, 2, 2, 1]
        );
        assert_eq!(counts(&build_to(1, 2, &[1], false).unwrap()), vec![1, 1]);
        assert_eq!(
            counts(&build_to(1, 2, &[1], true).unwrap()),
            vec![2, 2, 1, 1]
        );
        assert_eq!(
            counts(&build_te(1, 2, &[1], false).unwrap()),
            vec![1, 2, 2, 1]
        );
        assert!(build_ro(1, 3, &[1], true).unwrap().is_balanced());
        assert!(build_to(2, 4, &[1, 4], true).unwrap().is_balanced());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            build_re(2, 4, &[3, 1], false),
            Err(RegionError::Parameter(_))
        ));
        assert!(matches!(
            build_re(1, 4, &[5], false),
            Err(RegionError::Parameter(_))
        ));
        assert!(matches!(
            build_re(1, 4, &[0], false),
            Err(RegionError::Parameter(_))
        ));
        assert!(matches!(
            build_te(2, 4, &[1], false),
            Err(RegionError::Parameter(_))
        ));
        assert!(matches!(
            build_to(0, 4, &[], false),
            Err(RegionError::Parameter(_))
        ));
        // a_k = n is fine, and so is k = n.
        assert!(build_ro(2, 2, &[1, 2], false).is_ok());
    }

    #[test]
    fn adjacency_by_span() {
        let r = build_re(1, 3, &[2], false).unwrap();
        assert_eq!(
            r.adjacency(CellRef::new(1, 1)).unwrap(),
            vec![CellRef::new(2, 1), CellRef::new(2, 2)]
        );
        assert_eq!(
            r.adjacency(CellRef::new(3, 2)).unwrap(),
            vec![CellRef::new(2, 2), CellRef::new(2, 3)]
        );
        assert!(r
            .adjacency(CellRef::new(1, 3))
            .unwrap()
            .iter()
            .all(|c| c.row == 2));
        assert_eq!(
            r.adjacency(CellRef::new(3, 1)),
            Err(RegionError::Lookup {
                row: 3,
                position: 1
            })
        );
    }

    #[test]
    fn white_row_closed_forms() {
        // offset -1/2: white c touches black {c-1, c}; offset +1/2: {c, c+1}.
        let r = build_re(2, 4, &[1, 4], false).unwrap();
        for c in 1..=5u32 {
            let above: Vec<u32> = r
                .adjacency(CellRef::new(2, c))
                .unwrap()
                .into_iter()
                .filter(|x| x.row == 1)
                .map(|x| x.position)
                .collect();
            let want: Vec<u32> = [c.wrapping_sub(1), c]
                .into_iter()
                .filter(|p| (1..=4).contains(p))
                .collect();
            assert_eq!(above, want);
        }
        for c in 1..=4u32 {
            let below: Vec<u32> = r
                .adjacency(CellRef::new(4, c))
                .unwrap()
                .into_iter()
                .filter(|x| x.row == 5)
                .map(|x| x.position)
                .collect();
            let want: Vec<u32> = [c, c + 1].into_iter().filter(|p| *p <= 4).collect();
            assert_eq!(below, want);
        }
    }

    #[test]
    fn peel_tall_to_short() {
        let (short, removed) = peel_forced(&build_re(1, 2, &[1], true).unwrap()).unwrap();
        assert!(short.same_shape(&build_re(1, 2, &[1], false).unwrap()));
        assert_eq!(removed.len(), 2);
        assert!(!short.is_tall());

        let (short, removed) = peel_forced(&build_te(1, 3, &[2], true).unwrap()).unwrap();
        assert!(short.same_shape(&build_te(1, 3, &[2], false).unwrap()));
        assert_eq!(removed.len(), 3);
    }

    #[test]
    fn peel_leaves_unforced_regions_alone() {
        let r = build_ro(2, 4, &[2, 3], false).unwrap();
        let (same, removed) = peel_forced(&r).unwrap();
        assert_eq!(same, r);
        assert!(removed.is_empty());
    }

    #[test]
    fn peel_reports_dead_cells() {
        let r = RowRegion::custom(vec![
            Row::new(Color::Black, 0, [1]),
            Row::new(Color::White, 4, [1]),
        ])
        .unwrap();
        assert_eq!(
            peel_forced(&r).unwrap_err(),
            RegionError::Untileable {
                row: 1,
                position: 1
            }
        );
    }

    #[test]
    fn custom_rows_must_alternate() {
        let rows = vec![
            Row::new(Color::Black, 0, [1]),
            Row::new(Color::Black, 0, [1]),
        ];
        assert!(matches!(
            RowRegion::custom(rows),
            Err(RegionError::Malformed(_))
        ));
    }

    #[test]
    fn quartered_dispatch_shapes() {
        let r = quartered_aztec_diamond(4, QuarterVariant::R).unwrap();
        assert_eq!(
            (r.family(), r.k(), r.n(), r.a(), r.is_tall()),
            (Family::Re, 1, 2, &[1][..], true)
        );
        assert_eq!(r.cell_count(), 10);
        let r = quartered_aztec_diamond(2, QuarterVariant::R).unwrap();
        assert_eq!((r.family(), r.a()), (Family::Re, &[1][..]));
        assert!(quartered_aztec_diamond(1, QuarterVariant::R).is_err());
        assert!(quartered_aztec_diamond(2, QuarterVariant::Ka).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = build_te(2, 4, &[1, 3], true).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"offset_halves\":-1"));
        let back: RowRegion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
