use crate::error::{Error, Result};
use crate::order::FiniteOrder;
use crate::tqd::{Adj, AdjacencyStructure};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Height-2 order: s_i = i below s'_i = m+i and below s'_{i+1}.
pub fn zigzag(m: usize) -> Result<FiniteOrder> {
    if m == 0 {
        return Err(Error::Param("zigzag needs m >= 1".into()));
    }
    let mut rels = Vec::new();
    for i in 0..m {
        rels.push((i, m + i));
        if i + 1 < m {
            rels.push((i, m + i + 1));
        }
    }
    FiniteOrder::from_relations(2 * m, &rels)
}

/// A chain t_0..t_{k-1} plus one element w(i, s) for each i + 2 <= s, above
/// t_0..t_i and below t_s..t_{k-1}. Chain elements come first, then the
/// extra elements ordered by (i, s).
pub fn trunk_with_woodpeckers(k: usize) -> Result<FiniteOrder> {
    if k < 4 {
        return Err(Error::Param("needs k >= 4".into()));
    }
    let mut rels: Vec<(usize, usize)> = (1..k).map(|j| (j - 1, j)).collect();
    let mut next = k;
    for i in 0..k {
        for s in i + 2..k {
            rels.push((i, next));
            rels.push((next, s));
            next += 1;
        }
    }
    FiniteOrder::from_relations(next, &rels)
}

/// Index of w(i, s) inside `trunk_with_woodpeckers(k)`.
pub fn woodpecker_index(k: usize, i: usize, s: usize) -> usize {
    let before: usize = (0..i).map(|a| k.saturating_sub(a + 2)).sum();
    k + before + (s - i - 2)
}

/// Names for the elements of `pmrh(i)`, in index order.
pub fn pmrh_names(i: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=4).map(|p| format!("rmft_0_{p}")).collect();
    names.push("x_0_1".into());
    names.push("x_0_3".into());
    for step in 1..=i {
        names.push(format!("rmft_{step}_3"));
        names.push(format!("rmft_{step}_4"));
        names.push(format!("x_{step}_3"));
    }
    names
}

/// Family whose non-trunk part has half the height of the whole order.
pub fn pmrh(i: usize) -> FiniteOrder {
    // 0..4 = rmft_0_1..rmft_0_4, 4 = x_0_1, 5 = x_0_3
    let mut rels = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (4, 5),
        (4, 2),
        (4, 3),
        (0, 5),
        (1, 5),
    ];
    let mut rmft: Vec<usize> = vec![0, 1, 2, 3];
    let mut xs: Vec<usize> = vec![4, 5];
    let (mut last_x3, mut last_r4) = (5, 3);
    for step in 1..=i {
        let base = 6 + 3 * (step - 1);
        let (r3, r4, x3) = (base, base + 1, base + 2);
        rels.push((r3, r4));
        for &r in &rmft {
            rels.push((r, r3));
            rels.push((r, r4));
        }
        for &x in &xs {
            rels.push((x, x3));
        }
        rels.push((last_x3, r3));
        rels.push((last_r4, x3));
        rmft.extend([r3, r4]);
        xs.push(x3);
        last_x3 = x3;
        last_r4 = r4;
    }
    FiniteOrder::from_relations(6 + 3 * i, &rels).unwrap()
}

/// A chain of i elements where every chain element but the top has one
/// element covering only it, and every chain element but the bottom has one
/// element covered only by it.
pub fn groups_order(i: usize) -> Result<FiniteOrder> {
    if i < 2 {
        return Err(Error::Param("needs i >= 2".into()));
    }
    let mut rels: Vec<(usize, usize)> = (1..i).map(|j| (j - 1, j)).collect();
    let mut next = i;
    for j in 0..i - 1 {
        rels.push((j, next));
        next += 1;
    }
    for j in 1..i {
        rels.push((next, j));
        next += 1;
    }
    FiniteOrder::from_relations(next, &rels)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Param("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn from_levels_shuffled(level: &[usize], r: &mut ChaCha8Rng) -> FiniteOrder {
    let mut perm: Vec<usize> = (0..level.len()).collect();
    perm.shuffle(r);
    FiniteOrder::from_lt_fn(level.len(), |a, b| level[a] < level[b]).permuted(&perm)
}

/// Seeded uniform permutation of 0..n.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng(seed));
    p
}

pub fn random_trunk(n: usize, seed: u64) -> Result<FiniteOrder> {
    check_n(n)?;
    let mut r = rng(seed);
    let h = r.gen_range(1..=n);
    let level: Vec<usize> = (0..n)
        .map(|x| if x < h { x } else { r.gen_range(0..h) })
        .collect();
    Ok(from_levels_shuffled(&level, &mut r))
}

fn random_sp_with(n: usize, seed: u64, itov: bool) -> Result<FiniteOrder> {
    check_n(n)?;
    let mut r = rng(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut r);
    let mut lt = vec![false; n * n];
    fn gen(ids: &[usize], itov: bool, r: &mut ChaCha8Rng, n: usize, lt: &mut [bool]) {
        let m = ids.len();
        if m == 1 {
            return;
        }
        let series = r.gen_bool(0.5);
        let parts = r.gen_range(2..=m.min(3));
        let sizes: Vec<usize> = if itov && !series {
            let mut s = vec![1; parts];
            s[r.gen_range(0..parts)] = m - (parts - 1);
            s
        } else {
            let mut cuts: Vec<usize> = (1..m).collect::<Vec<_>>();
            cuts.shuffle(r);
            let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
            cuts.sort_unstable();
            cuts.push(m);
            let mut prev = 0;
            cuts.iter()
                .map(|&c| {
                    let s = c - prev;
                    prev = c;
                    s
                })
                .collect()
        };
        let mut chunks = Vec::new();
        let mut at = 0;
        for s in sizes {
            chunks.push(&ids[at..at + s]);
            at += s;
        }
        if series {
            for i in 0..chunks.len() {
                for j in i + 1..chunks.len() {
                    for &a in chunks[i] {
                        for &b in chunks[j] {
                            lt[a * n + b] = true;
                        }
                    }
                }
            }
        }
        for c in chunks {
            gen(c, itov, r, n, lt);
        }
    }
    gen(&ids, itov, &mut r, n, &mut lt);
    Ok(FiniteOrder::from_lt_fn(n, |a, b| lt[a * n + b]))
}

pub fn random_sp(n: usize, seed: u64) -> Result<FiniteOrder> {
    random_sp_with(n, seed, false)
}

/// Series-parallel with at most one non-singleton child per parallel node.
pub fn random_itov(n: usize, seed: u64) -> Result<FiniteOrder> {
    random_sp_with(n, seed, true)
}

/// A trunk plus an antichain of elements each sitting above a prefix of the
/// trunk levels and off every maximum chain.
pub fn random_cedar(n: usize, seed: u64) -> Result<FiniteOrder> {
    check_n(n)?;
    let mut r = rng(seed);
    let h = r.gen_range(1..=n);
    let m = if h == 1 { n } else { r.gen_range(h..=n) };
    // level for trunk elements; for the others, highest trunk level below (as level - 1)
    let mut level: Vec<isize> = (0..m)
        .map(|x| {
            if x < h {
                x as isize
            } else {
                r.gen_range(0..h) as isize
            }
        })
        .collect();
    let trunk_len = m;
    for _ in m..n {
        level.push(r.gen_range(-1..=(h as isize - 3)));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let lt = |a: usize, b: usize| match (a < trunk_len, b < trunk_len) {
        (true, true) => level[a] < level[b],
        (true, false) => level[a] <= level[b],
        _ => false,
    };
    Ok(FiniteOrder::from_lt_fn(n, lt).permuted(&perm))
}

pub fn random_order(n: usize, density: f64, seed: u64) -> Result<FiniteOrder> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Param(format!("density {density} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(density) {
                rels.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    Ok(FiniteOrder::from_relations(n, &rels)?.permuted(&perm))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn code(o: &FiniteOrder) -> u64 {
    let n = o.len();
    let mut c = 0u64;
    for i in 0..n {
        for j in 0..n {
            c = c << 1 | o.lt(i, j) as u64;
        }
    }
    c
}

/// Smallest relation code over all relabellings.
pub fn canonical_code(o: &FiniteOrder) -> u64 {
    permutations(o.len())
        .iter()
        .map(|p| code(&o.permuted(p)))
        .min()
        .unwrap()
}

/// One representative per isomorphism class of posets on exactly n elements.
pub fn all_posets(n: usize) -> Result<Vec<FiniteOrder>> {
    if n > 6 {
        return Err(Error::Param("all_posets supports n <= 6".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let rels: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let o = FiniteOrder::from_relations(n, &rels)?;
        // skip sets that are not already closed; their closure appears elsewhere
        if o.lt_pairs().len() != rels.len() {
            continue;
        }
        let c = perms.iter().map(|p| code(&o.permuted(p))).min().unwrap();
        if seen.insert(c) {
            out.push(o);
        }
    }
    Ok(out)
}

/// p rows by q columns; vertex (r, c) has index r * q + c.
pub fn grid(p: usize, q: usize) -> Result<AdjacencyStructure> {
    if p == 0 || q == 0 {
        return Err(Error::Param("grid sides must be at least 1".into()));
    }
    let mut g = AdjacencyStructure::new(p * q);
    for r in 0..p {
        for c in 0..q {
            if r + 1 < p {
                g.set(r * q + c, (r + 1) * q + c, Adj::Edge);
            }
            if c + 1 < q {
                g.set(r * q + c, r * q + c + 1, Adj::Edge);
            }
        }
    }
    Ok(g)
}
