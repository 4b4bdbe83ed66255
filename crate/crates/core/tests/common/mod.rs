#![allow(dead_code)]

use proptest::prelude::*;
use qorder::FiniteOrder;

/// Random order on 1..=max_n elements: an upper-triangular relation set
/// under a random relabelling.
pub fn arb_order(max_n: usize) -> impl Strategy<Value = FiniteOrder> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(proptest::bool::weighted(0.35), pairs),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(bits, perm)| {
                let mut rels = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if bits[k] {
                            rels.push((i, j));
                        }
                        k += 1;
                    }
                }
                FiniteOrder::from_relations(n, &rels)
                    .unwrap()
                    .permuted(&perm)
            })
    })
}

/// Linear extensions counted one by one.
pub fn enumerate_extensions(o: &FiniteOrder) -> u64 {
    fn go(o: &FiniteOrder, placed: &mut Vec<bool>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        (0..o.len())
            .filter(|&x| !placed[x] && o.down(x).iter().all(|&y| placed[y]))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|x| {
                placed[x] = true;
                let c = go(o, placed, left - 1);
                placed[x] = false;
                c
            })
            .sum()
    }
    go(o, &mut vec![false; o.len()], o.len())
}

/// Longest chain strictly below each element, by exploring every path.
pub fn longest_below(o: &FiniteOrder) -> Vec<usize> {
    fn depth(o: &FiniteOrder, x: usize) -> usize {
        o.down(x)
            .iter()
            .map(|&y| depth(o, y) + 1)
            .max()
            .unwrap_or(0)
    }
    (0..o.len()).map(|x| depth(o, x)).collect()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}
