mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use qar::amt::{
    check_chains, enumerate_amts, full_row, positives_in_row, validate, weight_sets, Amt,
};
use qar::formulas::{e_rational, eval_e, eval_o, increasing_tuples, o_rational, ArgVector};
use qar::region::{Color, Row, RowRegion};
use qar::tiling::count_tilings;

fn candidate() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=7).prop_flat_map(|order| {
        let rows: Vec<_> = (1..=order)
            .map(|i| proptest::collection::vec(1i64..=6, positives_in_row(i)))
            .collect();
        (Just(order), rows)
    })
}

/// Valid triangles of orders 2..=7 with bottom rows `2, 4, 6, ...`.
fn valid_pool() -> &'static [Amt] {
    static POOL: OnceLock<Vec<Amt>> = OnceLock::new();
    POOL.get_or_init(|| {
        (2..=7)
            .flat_map(|order| {
                let bottom: Vec<u32> = (1..=positives_in_row(order) as u32)
                    .map(|j| 2 * j)
                    .collect();
                enumerate_amts(order, &bottom).unwrap()
            })
            .collect()
    })
}

/// A valid triangle with one entry nudged by -1, 0 or +1.
fn mutated() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        -1i64..=1,
    )
        .prop_map(|(pick, entry, delta)| {
            let pool = valid_pool();
            let amt = &pool[pick.index(pool.len())];
            let mut rows: Vec<Vec<i64>> = amt
                .rows()
                .iter()
                .map(|r| r.iter().map(|&t| t as i64).collect())
                .collect();
            let slots: Vec<(usize, usize)> = rows
                .iter()
                .enumerate()
                .flat_map(|(i, r)| (0..r.len()).map(move |j| (i, j)))
                .collect();
            let (i, j) = slots[entry.index(slots.len())];
            rows[i][j] += delta;
            (amt.order(), rows)
        })
}

/// Random custom regions of alternating rows with small offsets.
fn custom_region() -> impl Strategy<Value = RowRegion> {
    proptest::collection::vec(
        (-2i32..=2, proptest::collection::btree_set(1u32..=5, 0..=5)),
        1..=6,
    )
    .prop_filter_map("nonempty", |rows| {
        let rows: Vec<Row> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (off, cells))| {
                let color = if i % 2 == 0 {
                    Color::Black
                } else {
                    Color::White
                };
                Row::new(color, off, cells)
            })
            .collect();
        RowRegion::custom(rows).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn validators_agree_on_random_candidates((order, rows) in candidate()) {
        prop_assert_eq!(validate(order, &rows).is_ok(), check_chains(order, &rows).is_ok());
    }

    #[test]
    fn validators_agree_on_mutations((order, rows) in mutated()) {
        prop_assert_eq!(validate(order, &rows).is_ok(), check_chains(order, &rows).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn adjacency_is_symmetric_and_geometric(r in custom_region()) {
        let (cells, adj) = common::span_graph(&r);
        for (i, &c) in cells.iter().enumerate() {
            let ours = r.adjacency(c).unwrap();
            prop_assert_eq!(ours.len(), adj[i].len());
            for d in ours {
                prop_assert!(r.adjacency(d).unwrap().contains(&c));
            }
        }
    }

    #[test]
    fn counts_match_brute_force_and_mirror(r in custom_region()) {
        let brute = common::brute_count(&r);
        prop_assert_eq!(count_tilings(&r), brute);
        prop_assert_eq!(count_tilings(&r.mirrored()), brute);
    }

    #[test]
    fn formulas_grow_with_the_last_entry(a in proptest::collection::btree_set(1u32..=12, 1..=4)) {
        let a: Vec<u32> = a.into_iter().collect();
        let mut b = a.clone();
        *b.last_mut().unwrap() += 1;
        let (a, b) = (ArgVector::new(a).unwrap(), ArgVector::new(b).unwrap());
        prop_assert!(eval_e(&b) >= eval_e(&a));
        prop_assert!(eval_o(&b) > eval_o(&a));
        let shifted = ArgVector::new(a.as_slice().iter().map(|x| x + 1).collect()).unwrap();
        prop_assert!(eval_e(&shifted) >= eval_e(&a));
        prop_assert!(eval_o(&shifted) > eval_o(&a));
    }
}

#[test]
fn formulas_are_integral() {
    for k in 1..=5 {
        for a in increasing_tuples(k, 10) {
            let a = ArgVector::new(a).unwrap();
            assert!(e_rational(&a).is_integer(), "E({:?})", a.as_slice());
            assert!(o_rational(&a).is_integer(), "O({:?})", a.as_slice());
        }
    }
}

#[test]
fn v_is_s_minus_k() {
    for k in 1..=3 {
        let order = 2 * k + 1;
        for bottom in increasing_tuples(k, 6) {
            for amt in enumerate_amts(order, &bottom).unwrap() {
                let sets = weight_sets(&amt);
                assert_eq!(sets.v_set.len() + k, sets.s_set.len(), "{amt:?}");
            }
        }
    }
}

#[test]
fn full_rows_are_antisymmetric() {
    assert_eq!(full_row(5, &[1, 4]), vec![-4, -1, 0, 1, 4]);
    assert_eq!(full_row(4, &[2, 3]), vec![-3, -2, 2, 3]);
}
