mod common;

use common::arb_order;
use proptest::prelude::*;
use qorder::generate::*;
use qorder::recognize::*;
use qorder::{FiniteOrder, Rel};

fn free(o: &FiniteOrder, p: Pattern) -> bool {
    find_obstruction(o, p).is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fast_tests_match_obstruction_search(o in arb_order(8)) {
        prop_assert_eq!(is_itov_fast(&o), free(&o, Pattern::Obs1) && free(&o, Pattern::Obs2));
        prop_assert_eq!(is_trunk(&o), free(&o, Pattern::Obst));
        prop_assert_eq!(sp_decompose(&o).is_ok(), free(&o, Pattern::Obs2));
    }

    #[test]
    fn class_inclusions(o in arb_order(8)) {
        if is_trunk(&o) {
            prop_assert!(is_itov_fast(&o));
        }
        if is_itov_fast(&o) {
            prop_assert!(is_up_regular(&o));
        }
        if is_cedar(&o) {
            prop_assert!(is_itov_fast(&o));
        }
    }

    #[test]
    fn sp_trees_rebuild_the_order(o in arb_order(9)) {
        if let Ok(t) = sp_decompose(&o) {
            prop_assert_eq!(t.evaluate(o.len()), o);
        }
    }

    #[test]
    fn neighbourhoods_of_incomparable_elements_nest(o in arb_order(8)) {
        prop_assume!(is_itov_fast(&o));
        let nb = neighbourhood_order(&o);
        prop_assert!(nb.check_table());
        for x in 0..o.len() {
            for y in x + 1..o.len() {
                if o.inc(x, y) {
                    let same = o.down(x) == o.down(y) && o.up(x) == o.up(y);
                    prop_assert!(same || nb.cmp(x, y) != Rel::Inc, "{} and {}", x, y);
                }
            }
        }
    }

    #[test]
    fn up_regular_orders_halve(o in arb_order(10)) {
        prop_assume!(is_up_regular(&o));
        let t = rmf_trunk(&o).expect("up-regular orders have a trunk");
        let rest: Vec<usize> = (0..o.len()).filter(|x| !t.contains(x)).collect();
        prop_assert!(o.induced(&rest).unwrap().height() <= o.height().div_ceil(2));
    }

    #[test]
    fn itov_decomposition_clauses(seed in 0u64..10_000, n in 1usize..15) {
        let o = random_itov(n, seed).unwrap();
        let d = decompose_itov(&o).unwrap();
        prop_assert!(is_trunk(&o.induced(&d.trunk).unwrap()));
        prop_assert!(is_itov_fast(&d.rest_order));
        prop_assert_eq!(d.trunk.len() + d.rest.len(), n);
    }

    #[test]
    fn generators_land_in_their_classes(seed in 0u64..10_000, n in 1usize..13) {
        prop_assert!(is_trunk(&random_trunk(n, seed).unwrap()));
        prop_assert!(is_itov_fast(&random_itov(n, seed).unwrap()));
        prop_assert!(sp_decompose(&random_sp(n, seed).unwrap()).is_ok());
        prop_assert!(is_cedar(&random_cedar(n, seed).unwrap()));
        prop_assert_eq!(random_order(n, 0.3, seed).unwrap(), random_order(n, 0.3, seed).unwrap());
    }
}

#[test]
fn exhaustive_small_posets() {
    for n in 1..=5 {
        for o in all_posets(n).unwrap() {
            assert_eq!(
                is_itov_fast(&o),
                free(&o, Pattern::Obs1) && free(&o, Pattern::Obs2)
            );
            assert_eq!(is_trunk(&o), free(&o, Pattern::Obst));
            assert_eq!(sp_decompose(&o).is_ok(), free(&o, Pattern::Obs2));
        }
    }
}

#[test]
fn max_recursive_height_family() {
    for i in 0..=2 {
        let o = pmrh(i);
        assert_eq!(o.len(), 6 + 3 * i);
        assert!(is_itov_fast(&o));
        let t = rmf_trunk(&o).unwrap();
        assert_eq!(t.len(), 4 + 2 * i);
        let rest: Vec<usize> = (0..o.len()).filter(|x| !t.contains(x)).collect();
        assert_eq!(o.induced(&rest).unwrap().height(), o.height().div_ceil(2));
    }
}

#[test]
fn woodpecker_trunks() {
    for k in 4..=12 {
        assert_eq!(
            trunk_with_woodpeckers(k).unwrap().len(),
            (k * k - k) / 2 + 1
        );
    }
    for k in 6..=8 {
        assert!(!is_up_regular(&trunk_with_woodpeckers(k).unwrap()));
    }
    for k in 4..=7 {
        assert!(free(&trunk_with_woodpeckers(k).unwrap(), Pattern::Obs1));
    }
}

#[test]
fn closures_cover_gadgets() {
    let full = |o: &FiniteOrder| {
        let n = o.len();
        (0..n).all(|x| (x + 1..n).all(|y| forced_equal_closure(o, (x, y)).len() == n))
    };
    for m in 1..=6 {
        assert!(full(&zigzag(m).unwrap()));
    }
    for i in 2..=5 {
        assert!(full(&groups_order(i).unwrap()));
    }
    assert_eq!(
        forced_equal_closure(&FiniteOrder::antichain(4), (1, 2)),
        vec![1, 2]
    );
}
