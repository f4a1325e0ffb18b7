//! Closed-form product formulas for the 2-enumeration of AMTs.
//!
//! For `a_1 < ... < a_k`,
//!
//! ```text
//! E(a) = 2^(k^2) / (0! 2! ... (2k-2)!) * prod_{i<j} (a_j - a_i) * prod_{i<j}  (a_i + a_j - 1)
//! O(a) = 2^(k^2) / (1! 3! ... (2k-1)!) * prod_{i<j} (a_j - a_i) * prod_{i<=j} (a_i + a_j - 1)
//! ```
//!
//! Both are evaluated as exact rationals and must come out integral.

mod corollary;

pub use corollary::{
    increasing_tuples, verify_corollary, Budget, CorollaryReport, CorollaryRow, SourceCounts,
};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::count::BigCount;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("invalid argument vector: {0}")]
    Parameter(String),
}

/// Strictly increasing positive integers, at least one of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ArgVector(Vec<u32>);

impl ArgVector {
    pub fn new(a: Vec<u32>) -> Result<Self, FormulaError> {
        if a.is_empty() {
            return Err(FormulaError::Parameter("need at least one entry".into()));
        }
        if a.contains(&0) || a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormulaError::Parameter(format!(
                "entries must be positive and strictly increasing: {a:?}"
            )));
        }
        Ok(ArgVector(a))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `2^(k^2) * prod_{i<j} (a_j - a_i) * prod (a_i + a_j - 1)`, the sum pair
/// product running over `i <= j` when `diagonal` is set.
fn numerator(a: &[u32], diagonal: bool) -> BigInt {
    let k = a.len();
    let mut num = BigInt::one() << (k * k);
    for i in 0..k {
        for j in i..k {
            let (x, y) = (a[i] as i64, a[j] as i64);
            if j > i {
                num *= int(y - x);
                num *= int(x + y - 1);
            } else if diagonal {
                num *= int(2 * x - 1);
            }
        }
    }
    num
}

/// `E(a)` as an exact rational, before the integrality check.
pub fn e_rational(a: &ArgVector) -> BigRational {
    let denom: BigUint = (0..a.k() as u32).map(|i| factorial(2 * i)).product();
    BigRational::new(numerator(a.as_slice(), false), BigInt::from(denom))
}

/// `O(a)` as an exact rational, before the integrality check.
pub fn o_rational(a: &ArgVector) -> BigRational {
    let denom: BigUint = (0..a.k() as u32).map(|i| factorial(2 * i + 1)).product();
    BigRational::new(numerator(a.as_slice(), true), BigInt::from(denom))
}

fn to_count(value: BigRational, name: &str, a: &ArgVector) -> BigCount {
    assert!(
        value.is_integer() && !value.is_negative(),
        "{name}({:?}) = {value} is not a nonnegative integer",
        a.as_slice()
    );
    BigCount::from(
        value
            .to_integer()
            .to_biguint()
            .expect("checked nonnegative"),
    )
}

pub fn eval_e(a: &ArgVector) -> BigCount {
    to_count(e_rational(a), "E", a)
}

pub fn eval_o(a: &ArgVector) -> BigCount {
    to_count(o_rational(a), "O", a)
}
