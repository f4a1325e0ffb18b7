use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::{e_rational, o_rational, ArgVector, FormulaError};
use crate::amt::two_enumeration;
use crate::region::{build, Family};
use crate::tiling::count_tilings;

/// Stops a sweep early; the report is then flagged incomplete.
#[derive(Clone, Debug)]
pub struct Budget {
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

fn exact<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One value per independent source, all exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceCounts {
    #[serde(serialize_with = "exact")]
    pub short: BigRational,
    #[serde(serialize_with = "exact")]
    pub tall: BigRational,
    #[serde(serialize_with = "exact")]
    pub formula: BigRational,
    /// `A^2` of the matching order, scaled by `2^-k` for the T families.
    #[serde(serialize_with = "exact")]
    pub amt: BigRational,
}

impl SourceCounts {
    pub fn all_equal(&self) -> bool {
        self.short == self.tall && self.tall == self.formula && self.formula == self.amt
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryRow {
    pub family: Family,
    pub k: usize,
    pub n: u32,
    pub a: Vec<u32>,
    pub lhs: SourceCounts,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub family: Family,
    pub k: usize,
    pub n: u32,
    pub rows: Vec<CorollaryRow>,
    pub complete: bool,
}

impl CorollaryReport {
    pub fn all_equal(&self) -> bool {
        self.complete && self.rows.iter().all(|r| r.equal)
    }

    /// One JSON object per tuple.
    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }
}

/// Increasing `k`-subsets of `1..=n` in lexicographic order.
pub fn increasing_tuples(k: usize, n: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn whole(v: &crate::count::BigCount) -> BigRational {
    BigRational::from_integer(BigInt::from(v.as_biguint().clone()))
}

/// Evaluates every member of the identity chain for one family at every
/// increasing `a` of size `k` drawn from `1..=n`: tiling counts of the short
/// and tall regions, the product formula and the 2-enumeration of AMTs.
pub fn verify_corollary(
    k: usize,
    n: u32,
    family: Family,
    budget: &Budget,
) -> Result<CorollaryReport, FormulaError> {
    if family == Family::Custom {
        return Err(FormulaError::Parameter(
            "custom regions have no identity".into(),
        ));
    }
    let max_k = (n as usize).saturating_sub(family.is_t() as usize);
    if k == 0 || k > max_k {
        return Err(FormulaError::Parameter(format!(
            "{family} needs 1 <= k <= {max_k} for n={n}, got k={k}"
        )));
    }
    let start = Instant::now();
    let order = family.amt_order(k).expect("quartered family");
    let scale = match family {
        Family::Te | Family::To => BigRational::new(BigInt::from(1), BigInt::from(1) << k),
        _ => BigRational::from_integer(BigInt::from(1)),
    };
    let mut report = CorollaryReport {
        family,
        k,
        n,
        rows: Vec::new(),
        complete: true,
    };
    for a in increasing_tuples(k, n) {
        if budget.time_limit.is_some_and(|t| start.elapsed() >= t) {
            report.complete = false;
            break;
        }
        let args = ArgVector::new(a.clone())?;
        let short =
            build(family, k, n, &a, false).map_err(|e| FormulaError::Parameter(e.to_string()))?;
        let tall =
            build(family, k, n, &a, true).map_err(|e| FormulaError::Parameter(e.to_string()))?;
        let formula = match family {
            Family::Re | Family::To => e_rational(&args),
            _ => o_rational(&args),
        };
        let amt = two_enumeration(order, &a).map_err(|e| FormulaError::Parameter(e.to_string()))?;
        let lhs = SourceCounts {
            short: whole(&count_tilings(&short)),
            tall: whole(&count_tilings(&tall)),
            formula: formula * &scale,
            amt: whole(&amt) * &scale,
        };
        report.rows.push(CorollaryRow {
            family,
            k,
            n,
            a,
            equal: lhs.all_equal(),
            lhs,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples() {
        assert_eq!(
            increasing_tuples(2, 3),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(increasing_tuples(1, 2), vec![vec![1], vec![2]]);
    }

    #[test]
    fn re_k1() {
        let r = verify_corollary(1, 3, Family::Re, &Budget::default()).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.all_equal());
        let two = BigRational::from_integer(2.into());
        assert!(r.rows.iter().all(|row| row.lhs.formula == two));
    }

    #[test]
    fn te_k1_values() {
        let r = verify_corollary(1, 3, Family::Te, &Budget::default()).unwrap();
        let got: Vec<String> = r.rows.iter().map(|row| row.lhs.short.to_string()).collect();
        assert_eq!(got, ["1", "3", "5"]);
        assert!(r.all_equal());
    }

    #[test]
    fn ro_shape_and_json() {
        let r = verify_corollary(2, 3, Family::Ro, &Budget::default()).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.all_equal());
        let first = r.to_json_lines().lines().next().unwrap().to_string();
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(v["family"], "RO");
        assert_eq!(v["a"], serde_json::json!([1, 2]));
        assert_eq!(v["equal"], true);
        assert!(v["lhs"]["tall"].is_string());
    }

    #[test]
    fn zero_budget_is_incomplete() {
        let b = Budget {
            time_limit: Some(Duration::ZERO),
        };
        let r = verify_corollary(1, 4, Family::Re, &b).unwrap();
        assert!(!r.complete);
        assert!(!r.all_equal());
    }

    #[test]
    fn rejects_k_at_least_n() {
        assert!(verify_corollary(2, 2, Family::Te, &Budget::default()).is_err());
        assert!(verify_corollary(3, 2, Family::Re, &Budget::default()).is_err());
        assert!(verify_corollary(2, 2, Family::Re, &Budget::default())
            .unwrap()
            .all_equal());
        assert!(verify_corollary(0, 2, Family::Re, &Budget::default()).is_err());
    }
}
