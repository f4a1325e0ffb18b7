mod common;

use std::collections::BTreeSet;

use common::{describe, quartered_corpus};
use qar::bijection::{fiber, map_tiling, verify_bijection, Mode};
use qar::region::{build, peel_forced, CellRef, Family};
use qar::tiling::{enumerate_tilings, Domino, EnumerationCap, Tiling};

#[test]
fn every_small_fixture_verifies() {
    let cap = EnumerationCap::default();
    let mut checked = 0;
    for r in quartered_corpus(3, 6) {
        if r.is_tall() || r.cell_count() > 40 {
            continue;
        }
        let mode = Mode::for_family(r.family()).unwrap();
        let report = verify_bijection(&r, mode, &cap).unwrap();
        assert!(report.ok(), "{}: {report:?}", describe(&r));
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn fibers_map_back() {
    let r = build(Family::Ro, 2, 4, &[2, 4], false).unwrap();
    for amt in qar::enumerate_amts(5, &[2, 4]).unwrap() {
        let f = fiber(&r, &amt, Mode::Phi).unwrap();
        assert_eq!(f.tilings.len(), 1 << f.exponent);
        for t in &f.tilings {
            assert_eq!(map_tiling(&r, t, Mode::Phi).unwrap(), amt);
        }
    }
}

/// Tall tilings restricted to the peeled region map like short tilings.
#[test]
fn peel_then_map() {
    for family in common::QUARTERED {
        let tall = build(family, 2, 4, &[1, 3], true).unwrap();
        let short = build(family, 2, 4, &[1, 3], false).unwrap();
        let (peeled, removed) = peel_forced(&tall).unwrap();
        let shift = tall.rows().len() - peeled.rows().len();
        let forced: BTreeSet<CellRef> = removed.iter().flat_map(|&(x, y)| [x, y]).collect();
        let mode = Mode::for_family(family).unwrap();
        let mut images = BTreeSet::new();
        for t in enumerate_tilings(&tall).unwrap() {
            let rest: Vec<Domino> = t
                .dominoes()
                .iter()
                .filter(|d| !forced.contains(&d.black))
                .map(|d| Domino {
                    black: CellRef::new(d.black.row - shift, d.black.position),
                    white: CellRef::new(d.white.row - shift, d.white.position),
                })
                .collect();
            let rest = Tiling::new(rest);
            images.insert(map_tiling(&short, &rest, mode).unwrap());
        }
        let order = family.amt_order(2).unwrap();
        assert_eq!(
            images.len(),
            qar::enumerate_amts(order, &[1, 3]).unwrap().len()
        );
    }
}
