//! Maps from tilings of quartered Aztec rectangles to AMTs, and the fibers of
//! those maps.
//!
//! `phi` reads an AMT off a tiling of an RE or RO region: row `i` of the
//! triangle lists the positions of the black cells in black row `i` whose
//! domino partner lies in the row above. `psi` does the same for TE and TO
//! regions but records the positions that are *not* matched upward, counting
//! the positions removed from the bottom row. The T regions have one black
//! row fewer than the triangle has rows; the triangle's first row has no
//! positive entries and is not read from the region.
//!
//! Fibers are rebuilt by labeling each black cell `U` or `D` from the triangle
//! and enumerating the tilings that honor the labels. Each fiber has
//! `2^|S|` (phi) or `2^|V|` (psi) members.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::amt::{enumerate_amts, weight_sets, Amt, AmtError};
use crate::count::BigCount;
use crate::region::{CellRef, Family, RowRegion};
use crate::tiling::{
    count_tilings, enumerate_constrained_with, enumerate_tilings_with, BranchStats, EnumerationCap,
    Tiling, TilingError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Phi,
    Psi,
}

impl Mode {
    /// The map that applies to a family.
    pub fn for_family(family: Family) -> Option<Mode> {
        match family {
            Family::Re | Family::Ro => Some(Mode::Phi),
            Family::Te | Family::To => Some(Mode::Psi),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Phi => "phi",
            Mode::Psi => "psi",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = BijectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phi" => Ok(Mode::Phi),
            "psi" => Ok(Mode::Psi),
            _ => Err(BijectionError::Parameter(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Matched upward.
    U,
    /// Matched downward.
    D,
}

/// A `U`/`D` label for each black cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelAssignment(BTreeMap<CellRef, Label>);

impl LabelAssignment {
    pub fn new() -> Self {
        LabelAssignment::default()
    }

    pub fn insert(&mut self, cell: CellRef, label: Label) {
        self.0.insert(cell, label);
    }

    pub fn get(&self, cell: CellRef) -> Option<Label> {
        self.0.get(&cell).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellRef, &Label)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The labels a tiling induces on `region`.
    pub fn from_tiling(tiling: &Tiling) -> Self {
        LabelAssignment(
            tiling
                .dominoes()
                .iter()
                .map(|d| (d.black, if d.is_upward() { Label::U } else { Label::D }))
                .collect(),
        )
    }
}

impl FromIterator<(CellRef, Label)> for LabelAssignment {
    fn from_iter<I: IntoIterator<Item = (CellRef, Label)>>(iter: I) -> Self {
        LabelAssignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BijectionError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("tiling does not fit the region: {0}")]
    Mismatch(TilingError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Amt(#[from] AmtError),
}

/// AMT order and the AMT row carried by the first black row.
struct Layout {
    order: usize,
    first_row: usize,
    black_rows: Vec<usize>,
}

fn layout(region: &RowRegion, mode: Mode) -> Result<Layout, BijectionError> {
    let family = region.family();
    if Mode::for_family(family) != Some(mode) {
        return Err(BijectionError::Parameter(format!(
            "{mode} does not apply to {family} regions"
        )));
    }
    if region.is_tall() {
        return Err(BijectionError::Parameter(
            "maps apply to short regions; peel the tall variant first".into(),
        ));
    }
    let order = family.amt_order(region.k()).expect("quartered family");
    let first_row = if family.is_t() { 2 } else { 1 };
    let black_rows = region.black_rows();
    if black_rows.len() + first_row - 1 != order {
        return Err(BijectionError::Parameter(format!(
            "region has {} black rows, expected {}",
            black_rows.len(),
            order + 1 - first_row
        )));
    }
    Ok(Layout {
        order,
        first_row,
        black_rows,
    })
}

/// Positive halves read off a tiling, before validation.
fn image_rows(region: &RowRegion, tiling: &Tiling, mode: Mode, lay: &Layout) -> Vec<Vec<u32>> {
    let mut rows = vec![Vec::new(); lay.first_row - 1];
    for &r in &lay.black_rows {
        let row = &region.rows()[r - 1];
        let upward = |p: u32| {
            tiling
                .domino_at_black(CellRef::new(r, p))
                .is_some_and(|d| d.is_upward())
        };
        let entries = match mode {
            Mode::Phi => row.cells.iter().copied().filter(|&p| upward(p)).collect(),
            Mode::Psi => (1..=region.n())
                .filter(|p| !row.cells.contains(p) || !upward(*p))
                .collect(),
        };
        rows.push(entries);
    }
    rows
}

fn image(
    region: &RowRegion,
    tiling: &Tiling,
    mode: Mode,
    lay: &Layout,
) -> Result<Amt, BijectionError> {
    let rows = image_rows(region, tiling, mode, lay);
    let amt = Amt::new(lay.order, rows.clone()).map_err(|e| {
        BijectionError::Invariant(format!("{mode} image {rows:?} is not an AMT: {e}"))
    })?;
    if amt.bottom() != region.a() {
        return Err(BijectionError::Invariant(format!(
            "{mode} image has bottom {:?}, expected {:?}",
            amt.bottom(),
            region.a()
        )));
    }
    Ok(amt)
}

/// Applies `phi` or `psi`, whichever `mode` names.
pub fn map_tiling(region: &RowRegion, tiling: &Tiling, mode: Mode) -> Result<Amt, BijectionError> {
    let lay = layout(region, mode)?;
    tiling.validate(region).map_err(BijectionError::Mismatch)?;
    image(region, tiling, mode, &lay)
}

pub fn phi(region: &RowRegion, tiling: &Tiling) -> Result<Amt, BijectionError> {
    map_tiling(region, tiling, Mode::Phi)
}

pub fn psi(region: &RowRegion, tiling: &Tiling) -> Result<Amt, BijectionError> {
    map_tiling(region, tiling, Mode::Psi)
}

pub fn labels_from_amt(
    region: &RowRegion,
    amt: &Amt,
    mode: Mode,
) -> Result<LabelAssignment, BijectionError> {
    let lay = layout(region, mode)?;
    if amt.order() != lay.order {
        return Err(BijectionError::Parameter(format!(
            "AMT has order {}, region needs {}",
            amt.order(),
            lay.order
        )));
    }
    if amt.bottom() != region.a() {
        return Err(BijectionError::Parameter(format!(
            "AMT bottom {:?} differs from the region's {:?}",
            amt.bottom(),
            region.a()
        )));
    }
    let mut labels = LabelAssignment::new();
    for (j, &r) in lay.black_rows.iter().enumerate() {
        let entries = amt.row(lay.first_row + j);
        for &p in &region.rows()[r - 1].cells {
            let listed = entries.contains(&p);
            let label = match (mode, listed) {
                (Mode::Phi, true) | (Mode::Psi, false) => Label::U,
                _ => Label::D,
            };
            labels.insert(CellRef::new(r, p), label);
        }
    }
    Ok(labels)
}

/// Exponent of the fiber size: `|S|` for phi, `|V|` for psi.
pub fn fiber_exponent(amt: &Amt, mode: Mode) -> usize {
    let sets = weight_sets(amt);
    match mode {
        Mode::Phi => sets.s_set.len(),
        Mode::Psi => sets.v_set.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub tilings: Vec<Tiling>,
    pub exponent: usize,
    pub branches: BranchStats,
}

/// The tilings that map to `amt`. Fails if the fiber size is not
/// `2^exponent` or if a member maps elsewhere.
pub fn fiber(region: &RowRegion, amt: &Amt, mode: Mode) -> Result<Fiber, BijectionError> {
    fiber_with(region, amt, mode, &EnumerationCap::default())
}

pub fn fiber_with(
    region: &RowRegion,
    amt: &Amt,
    mode: Mode,
    cap: &EnumerationCap,
) -> Result<Fiber, BijectionError> {
    let labels = labels_from_amt(region, amt, mode)?;
    let found = enumerate_constrained_with(region, &labels, cap)?;
    let exponent = fiber_exponent(amt, mode);
    if exponent >= 64 || found.tilings.len() as u64 != 1u64 << exponent {
        return Err(BijectionError::Invariant(format!(
            "fiber of {amt:?} has {} tilings, expected 2^{exponent}",
            found.tilings.len()
        )));
    }
    let lay = layout(region, mode)?;
    for t in &found.tilings {
        let back = image(region, t, mode, &lay)?;
        if &back != amt {
            return Err(BijectionError::Invariant(format!(
                "fiber member maps to {back:?} instead of {amt:?}"
            )));
        }
    }
    Ok(Fiber {
        tilings: found.tilings,
        exponent,
        branches: found.branches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberEntry {
    pub amt: Amt,
    /// Tilings found by the label-constrained search.
    pub size: usize,
    /// Tilings of the full enumeration that map to this AMT.
    pub enumerated: usize,
    pub expected: u64,
    pub branch_points: usize,
    pub non_block_branches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub family: Family,
    pub k: usize,
    pub n: u32,
    pub a: Vec<u32>,
    pub mode: Mode,
    pub tilings: usize,
    pub dp_count: BigCount,
    pub amts: usize,
    pub fibers: Vec<FiberEntry>,
    /// Every image is an AMT with the region's bottom row.
    pub images_valid: bool,
    /// Every fiber has `2^|S|` or `2^|V|` members.
    pub fiber_law_ok: bool,
    pub surjective: bool,
    /// Constrained fibers coincide with the groups of the full enumeration
    /// and those groups cover every tiling once.
    pub partition_ok: bool,
    /// The sum of expected fiber sizes equals the DP count.
    pub sum_ok: bool,
    /// Every branch point of the constrained searches was a 2x2 block.
    pub blocks_ok: bool,
}

impl BijectionReport {
    pub fn ok(&self) -> bool {
        self.images_valid
            && self.fiber_law_ok
            && self.surjective
            && self.partition_ok
            && self.sum_ok
            && self.blocks_ok
    }
}

/// Enumerates every tiling, groups them by image, and checks the groups
/// against the label-constrained fibers of every AMT with the region's
/// bottom row.
pub fn verify_bijection(
    region: &RowRegion,
    mode: Mode,
    cap: &EnumerationCap,
) -> Result<BijectionReport, BijectionError> {
    let lay = layout(region, mode)?;
    let tilings = enumerate_tilings_with(region, cap)?;
    let mut images_valid = true;
    let mut groups: BTreeMap<Amt, BTreeSet<Tiling>> = BTreeMap::new();
    for t in &tilings {
        match image(region, t, mode, &lay) {
            Ok(amt) => {
                groups.entry(amt).or_default().insert(t.clone());
            }
            Err(_) => images_valid = false,
        }
    }
    let amts = enumerate_amts(lay.order, region.a())?;
    let mut fibers = Vec::with_capacity(amts.len());
    let mut partition_ok = images_valid;
    let mut expected_sum: u128 = 0;
    for amt in &amts {
        let labels = labels_from_amt(region, amt, mode)?;
        let found = enumerate_constrained_with(region, &labels, cap)?;
        let exponent = fiber_exponent(amt, mode);
        let expected = if exponent < 64 {
            1u64 << exponent
        } else {
            u64::MAX
        };
        expected_sum += expected as u128;
        let group = groups.get(amt);
        let constrained: BTreeSet<Tiling> = found.tilings.iter().cloned().collect();
        if group.map_or(!constrained.is_empty(), |g| *g != constrained) {
            partition_ok = false;
        }
        fibers.push(FiberEntry {
            amt: amt.clone(),
            size: found.tilings.len(),
            enumerated: group.map_or(0, BTreeSet::len),
            expected,
            branch_points: found.branches.branch_points,
            non_block_branches: found.branches.non_block,
        });
    }
    let known: BTreeSet<&Amt> = amts.iter().collect();
    if groups.keys().any(|a| !known.contains(a)) {
        partition_ok = false;
    }
    if groups.values().map(BTreeSet::len).sum::<usize>() != tilings.len() {
        partition_ok = false;
    }
    let dp_count = count_tilings(region);
    Ok(BijectionReport {
        family: region.family(),
        k: region.k(),
        n: region.n(),
        a: region.a().to_vec(),
        mode,
        tilings: tilings.len(),
        amts: amts.len(),
        images_valid,
        fiber_law_ok: fibers.iter().all(|f| f.size as u64 == f.expected),
        surjective: fibers.iter().all(|f| f.enumerated > 0),
        partition_ok,
        sum_ok: dp_count.to_u64().map(u128::from) == Some(expected_sum)
            && expected_sum == tilings.len() as u128,
        blocks_ok: fibers.iter().all(|f| f.non_block_branches == 0),
        dp_count,
        fibers,
    })
}
