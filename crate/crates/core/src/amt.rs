//! Antisymmetric monotone triangles.
//!
//! A monotone triangle of order `N` has rows `1..=N`, row `i` holding `i`
//! strictly increasing integers, with consecutive rows interlacing:
//! `a[i+1][j] <= a[i][j] <= a[i+1][j+1]`. Antisymmetry (`a[i][j] =
//! -a[i][i+1-j]`) means row `i` is fixed by its `floor(i/2)` positive entries,
//! plus a middle zero when `i` is odd. Only those positive halves are stored.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::count::BigCount;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AmtError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("not an antisymmetric monotone triangle: {0}")]
    Invalid(Violation),
}

/// First constraint a candidate triangle breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    ZeroOrder,
    RowCount {
        expected: usize,
        found: usize,
    },
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    NonPositive {
        row: usize,
    },
    NotIncreasing {
        row: usize,
    },
    /// Rows `row` and `row + 1` fail to interlace at column `column`.
    Interlacing {
        row: usize,
        column: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroOrder => write!(f, "order must be positive"),
            Violation::RowCount { expected, found } => {
                write!(f, "expected {expected} rows, found {found}")
            }
            Violation::RowLength {
                row,
                expected,
                found,
            } => write!(
                f,
                "row {row} must have {expected} positive entries, found {found}"
            ),
            Violation::NonPositive { row } => write!(f, "row {row} has a non-positive entry"),
            Violation::NotIncreasing { row } => write!(f, "row {row} is not strictly increasing"),
            Violation::Interlacing { row, column } => write!(
                f,
                "rows {row} and {} do not interlace at column {column}",
                row + 1
            ),
        }
    }
}

/// Number of positive entries in row `i`.
pub fn positives_in_row(i: usize) -> usize {
    i / 2
}

/// Full row `i` rebuilt from its positive half.
pub fn full_row(i: usize, positives: &[i64]) -> Vec<i64> {
    let mut row: Vec<i64> = positives.iter().rev().map(|&t| -t).collect();
    if i % 2 == 1 {
        row.push(0);
    }
    row.extend_from_slice(positives);
    row
}

/// Checks a candidate against the definition by rebuilding the full rows.
pub fn validate(order: usize, rows: &[Vec<i64>]) -> Result<(), Violation> {
    check_shape(order, rows)?;
    let full: Vec<Vec<i64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| full_row(i + 1, r))
        .collect();
    for (i, row) in full.iter().enumerate() {
        if row.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Violation::NotIncreasing { row: i + 1 });
        }
    }
    for (i, pair) in full.windows(2).enumerate() {
        let (upper, lower) = (&pair[0], &pair[1]);
        for (j, &x) in upper.iter().enumerate() {
            if !(lower[j] <= x && x <= lower[j + 1]) {
                return Err(Violation::Interlacing {
                    row: i + 1,
                    column: j + 1,
                });
            }
        }
    }
    Ok(())
}

fn check_shape(order: usize, rows: &[Vec<i64>]) -> Result<(), Violation> {
    if order == 0 {
        return Err(Violation::ZeroOrder);
    }
    if rows.len() != order {
        return Err(Violation::RowCount {
            expected: order,
            found: rows.len(),
        });
    }
    for (i, r) in rows.iter().enumerate() {
        let expected = positives_in_row(i + 1);
        if r.len() != expected {
            return Err(Violation::RowLength {
                row: i + 1,
                expected,
                found: r.len(),
            });
        }
        if r.iter().any(|&t| t <= 0) {
            return Err(Violation::NonPositive { row: i + 1 });
        }
    }
    Ok(())
}

/// Checks only the positive halves, as two interleaved chains per row pair:
/// for odd `i`, `t[i-1][1] <= t[i][1] <= t[i-1][2] <= ... <= t[i][l]`;
/// for even `i`, `t[i][1] <= t[i-1][1] <= t[i][2] <= ... <= t[i][l]`.
pub fn check_chains(order: usize, rows: &[Vec<i64>]) -> Result<(), Violation> {
    check_shape(order, rows)?;
    for (i, r) in rows.iter().enumerate() {
        if r.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Violation::NotIncreasing { row: i + 1 });
        }
    }
    for i in 2..=order {
        let (upper, lower) = (&rows[i - 2], &rows[i - 1]);
        let chain: Vec<i64> = if i % 2 == 1 {
            upper
                .iter()
                .zip(lower)
                .flat_map(|(&u, &l)| [u, l])
                .collect()
        } else {
            let mut c = Vec::with_capacity(upper.len() + lower.len());
            for (j, &l) in lower.iter().enumerate() {
                c.push(l);
                if let Some(&u) = upper.get(j) {
                    c.push(u);
                }
            }
            c
        };
        if let Some(pos) = chain.windows(2).position(|w| w[0] > w[1]) {
            return Err(Violation::Interlacing {
                row: i - 1,
                column: pos / 2 + 1,
            });
        }
    }
    Ok(())
}

/// A validated antisymmetric monotone triangle, stored by positive halves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawAmt")]
pub struct Amt {
    order: usize,
    rows: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct RawAmt {
    order: usize,
    rows: Vec<Vec<u32>>,
}

impl TryFrom<RawAmt> for Amt {
    type Error = AmtError;

    fn try_from(raw: RawAmt) -> Result<Self, Self::Error> {
        Amt::new(raw.order, raw.rows)
    }
}

impl Amt {
    pub fn new(order: usize, rows: Vec<Vec<u32>>) -> Result<Amt, AmtError> {
        let signed: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&t| t as i64).collect())
            .collect();
        validate(order, &signed).map_err(AmtError::Invalid)?;
        Ok(Amt { order, rows })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Positive halves, row 1 first.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Positive entries of row `i` (1-based).
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i - 1]
    }

    pub fn bottom(&self) -> &[u32] {
        self.rows.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn full_rows(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| full_row(i + 1, &r.iter().map(|&t| t as i64).collect::<Vec<_>>()))
            .collect()
    }
}

/// Every AMT of the given order whose bottom row has the given positive
/// entries, sorted by rows from the top.
pub fn enumerate_amts(order: usize, bottom: &[u32]) -> Result<Vec<Amt>, AmtError> {
    if order == 0 {
        return Err(AmtError::Parameter("order must be positive".into()));
    }
    if bottom.len() != positives_in_row(order) {
        return Err(AmtError::Parameter(format!(
            "order {order} needs {} bottom entries, got {}",
            positives_in_row(order),
            bottom.len()
        )));
    }
    if bottom.windows(2).any(|w| w[0] >= w[1]) || bottom.contains(&0) {
        return Err(AmtError::Parameter(format!(
            "bottom entries must be positive and strictly increasing: {bottom:?}"
        )));
    }
    let mut out = Vec::new();
    let mut stack = vec![bottom.to_vec()];
    extend_upward(order, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

/// `stack` holds rows `order, order-1, ...` (bottom first).
fn extend_upward(order: usize, stack: &mut Vec<Vec<u32>>, out: &mut Vec<Amt>) {
    let below_index = order - stack.len() + 1;
    if below_index == 1 {
        let rows: Vec<Vec<u32>> = stack.iter().rev().cloned().collect();
        out.push(Amt { order, rows });
        return;
    }
    let below = stack.last().expect("nonempty").clone();
    let mut candidates = Vec::new();
    rows_above(below_index, &below, &mut Vec::new(), &mut candidates);
    for row in candidates {
        stack.push(row);
        extend_upward(order, stack, out);
        stack.pop();
    }
}

/// All positive halves for row `i - 1` that interlace with `below` (row `i`).
fn rows_above(i: usize, below: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let len = positives_in_row(i - 1);
    let j = prefix.len();
    if j == len {
        out.push(prefix.clone());
        return;
    }
    // Bounds on entry j (0-based) of the row above.
    let (lo, hi) = if i % 2 == 1 {
        // Both rows have `len` entries: below[j-1] <= x <= below[j].
        (if j == 0 { 1 } else { below[j - 1] }, below[j])
    } else {
        // Below has one more entry: below[j] <= x <= below[j+1].
        (below[j], below[j + 1])
    };
    let lo = lo.max(prefix.last().map_or(1, |&p| p + 1));
    for x in lo..=hi {
        prefix.push(x);
        rows_above(i, below, prefix, out);
        prefix.pop();
    }
}

/// Positive entries missing from the neighboring row, recorded as `(row, value)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightSets {
    /// Not present in the row above.
    pub s_set: BTreeSet<(usize, u32)>,
    /// Not present in the row below; the bottom row never contributes.
    pub v_set: BTreeSet<(usize, u32)>,
}

pub fn weight_sets(amt: &Amt) -> WeightSets {
    let mut sets = WeightSets::default();
    for i in 1..=amt.order() {
        let row = amt.row(i);
        for &t in row {
            if i == 1 || !amt.row(i - 1).contains(&t) {
                sets.s_set.insert((i, t));
            }
            if i < amt.order() && !amt.row(i + 1).contains(&t) {
                sets.v_set.insert((i, t));
            }
        }
    }
    sets
}

/// Sum of `q^|S|` over the AMTs with the given bottom row.
pub fn q_enumeration(
    order: usize,
    bottom: &[u32],
    q: &BigRational,
) -> Result<BigRational, AmtError> {
    let amts = enumerate_amts(order, bottom)?;
    let mut total = BigRational::zero();
    for amt in &amts {
        let w = weight_sets(amt).s_set.len();
        total += num_traits::pow(q.clone(), w);
    }
    Ok(total)
}

/// The `q = 2` case, kept in integers.
pub fn two_enumeration(order: usize, bottom: &[u32]) -> Result<BigCount, AmtError> {
    let amts = enumerate_amts(order, bottom)?;
    Ok(amts
        .iter()
        .map(|a| BigCount::pow2(weight_sets(a).s_set.len() as u32))
        .sum())
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl fmt::Display for Amt {
    /// Full triangle, rows centered.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = self.full_rows();
        let width = full
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1)
            + 1;
        for (i, row) in full.iter().enumerate() {
            let indent = (self.order - i - 1) * width / 2;
            let mut line = " ".repeat(indent);
            for x in row {
                line.push_str(&format!("{x:>width$}"));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}
