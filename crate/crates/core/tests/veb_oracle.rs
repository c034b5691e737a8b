use std::collections::BTreeSet;

use lcs_threshold::VebTree;
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Insert(u64),
    Delete(u64),
}

fn ops(universe: u64, len: usize) -> impl Strategy<Value = Vec<Op>> {
    proptest::collection::vec(
        prop_oneof![
            3 => (0..universe).prop_map(Op::Insert),
            2 => (0..universe).prop_map(Op::Delete),
        ],
        0..len,
    )
}

fn assert_agrees(
    tree: &VebTree,
    oracle: &BTreeSet<u64>,
    universe: u64,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(tree.len(), oracle.len() as u64);
    prop_assert_eq!(tree.min(), oracle.first().copied());
    prop_assert_eq!(tree.max(), oracle.last().copied());
    for x in 0..universe {
        prop_assert_eq!(tree.contains(x).unwrap(), oracle.contains(&x));
        prop_assert_eq!(
            tree.successor(x).unwrap(),
            oracle.range(x + 1..).next().copied()
        );
        prop_assert_eq!(
            tree.predecessor(x).unwrap(),
            oracle.range(..x).next_back().copied()
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_sorted_set(universe_request in 1u64..=1024, script in ops(1024, 600)) {
        let mut tree = VebTree::new(universe_request).unwrap();
        let universe = tree.universe();
        let mut oracle = BTreeSet::new();
        for op in script {
            match op {
                Op::Insert(k) => {
                    let k = k % universe;
                    prop_assert_eq!(tree.insert(k).unwrap(), oracle.insert(k));
                }
                Op::Delete(k) => {
                    let k = k % universe;
                    prop_assert_eq!(tree.delete(k).unwrap(), oracle.remove(&k));
                }
            }
            tree.validate().map_err(TestCaseError::fail)?;
            assert_agrees(&tree, &oracle, universe)?;
        }
    }

    #[test]
    fn successor_predecessor_duality(keys in proptest::collection::btree_set(0u64..256, 0..80)) {
        let mut tree = VebTree::new(256).unwrap();
        for &k in &keys {
            tree.insert(k).unwrap();
        }
        // succ(x) = y  <=>  y is stored and nothing stored lies in (x, y).
        for x in 0..256u64 {
            for y in x + 1..256 {
                let succ_is_y = tree.successor(x).unwrap() == Some(y);
                let dual = tree.contains(y).unwrap() && tree.predecessor(y).unwrap().is_none_or(|p| p <= x);
                prop_assert_eq!(succ_is_y, dual, "x = {}, y = {}", x, y);
            }
        }
    }
}

#[test]
fn iteration_is_sorted_and_complete() {
    let mut tree = VebTree::new(1 << 20).unwrap();
    let keys = [0u64, 1, 17, 4096, 65535, 65536, 1 << 19, (1 << 20) - 1];
    for &k in keys.iter().rev() {
        tree.insert(k).unwrap();
    }
    assert_eq!(tree.iter().collect::<Vec<_>>(), keys.to_vec());
    tree.validate().unwrap();
}
