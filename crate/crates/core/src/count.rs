use crate::error::{Error, Result};
use crate::order::FiniteOrder;
use crate::recognize::{
    is_cedar, is_trunk, rmf_trunk, sp_decompose, trunk_profile, SpKind, SpTree,
};
use num_bigint::BigUint;
use num_traits::One;

pub type BigCount = BigUint;

pub const BRUTE_CAP: usize = 11;

/// Interleavings of a p-chain with a q-chain.
pub fn fusion(p: usize, q: usize) -> BigCount {
    // table[a][b] = Fusion(a, b) for a <= p, b <= q
    let mut table = vec![vec![BigUint::one(); q + 1]; p + 1];
    for b in 1..=q {
        for a in 0..=p {
            table[a][b] = if b == 1 {
                BigUint::from(a + 1)
            } else {
                (0..=a)
                    .map(|i| &table[a - i][b - 2] * BigUint::from(i + 1))
                    .sum()
            };
        }
    }
    table[p][q].clone()
}

pub fn factorial(n: usize) -> BigCount {
    (1..=n).map(BigUint::from).product()
}

pub fn count_trunk(profile: &[usize]) -> BigCount {
    profile.iter().map(|&t| factorial(t)).product()
}

/// Combines per-component counts: `parts[i] = (count, size)`.
pub fn count_disconnected(parts: &[(BigCount, usize)]) -> BigCount {
    let mut total: BigUint = parts.iter().map(|(c, _)| c).product();
    let mut before = 0;
    for (i, (_, size)) in parts.iter().enumerate() {
        if i > 0 {
            total *= fusion(before, *size);
        }
        before += size;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Outside,
    Trunk,
}

/// Linear extensions of a cedar by dynamic programming over insertion
/// positions. Elements are added level by level; the state records the last
/// position held by a trunk element of a lower level (`j1`) and of the current
/// level or lower (`j2`), with -1 meaning none.
pub fn count_cedar(o: &FiniteOrder) -> Result<BigCount> {
    if !is_cedar(o) {
        return Err(Error::NotCedar);
    }
    let trunk = rmf_trunk(o).unwrap();
    let level = o.levels().level;
    let mut order: Vec<usize> = (0..o.len()).collect();
    order.sort_by_key(|&x| (level[x], !trunk.contains(&x), x));
    let steps: Vec<(usize, Step)> = order
        .iter()
        .map(|&x| {
            let kind = if trunk.contains(&x) {
                Step::Trunk
            } else {
                Step::Outside
            };
            (level[x], kind)
        })
        .collect();
    Ok(cedar_dp(&steps))
}

fn cedar_dp(steps: &[(usize, Step)]) -> BigCount {
    let n = steps.len();
    // table[j1 + 1][j2 + 1]
    let zero = || vec![vec![BigUint::default(); n + 1]; n + 1];
    let mut table = zero();
    table[0][0] = BigUint::one();
    let mut current = 0;
    for (i, &(lvl, step)) in steps.iter().enumerate() {
        let next_level = lvl > current;
        current = lvl;
        let mut next = zero();
        for a in 0..=i {
            for b in a..=i {
                if table[a][b] == BigUint::default() {
                    continue;
                }
                let ways = table[a][b].clone();
                let (j1, j2) = (a as isize - 1, b as isize - 1);
                // entering a new level: everything placed so far is a lower level
                let (j1, j2) = if next_level { (j2, j2) } else { (j1, j2) };
                let i = i as isize;
                let at = |j: isize| (j + 1) as usize;
                match step {
                    Step::Outside => {
                        // slots j1+1..=j2 push the last trunk position up by one
                        if j2 > j1 {
                            next[at(j1)][at(j2 + 1)] += &ways * BigUint::from((j2 - j1) as usize);
                        }
                        next[at(j1)][at(j2)] += &ways * BigUint::from((i - j2) as usize);
                    }
                    Step::Trunk => {
                        if j2 > j1 {
                            next[at(j1)][at(j2 + 1)] += &ways * BigUint::from((j2 - j1) as usize);
                        }
                        for s in (j2 + 1).max(j1 + 1)..=i {
                            next[at(j1)][at(s)] += &ways;
                        }
                    }
                }
            }
        }
        table = next;
    }
    table.into_iter().flatten().sum()
}

pub fn count_sp(o: &FiniteOrder) -> Result<BigCount> {
    fn rec(t: &SpTree) -> BigCount {
        match &t.kind {
            SpKind::Leaf(_) => BigUint::one(),
            SpKind::Series(c) => c.iter().map(rec).product(),
            SpKind::Parallel(c) => {
                let parts: Vec<(BigCount, usize)> = c.iter().map(|k| (rec(k), k.size)).collect();
                count_disconnected(&parts)
            }
        }
    }
    Ok(rec(&sp_decompose(o)?))
}

pub fn count_bruteforce(o: &FiniteOrder) -> Result<BigCount> {
    count_bruteforce_capped(o, BRUTE_CAP)
}

/// Counts by removing maximal elements one at a time, memoized on the set
/// still to be placed.
pub fn count_bruteforce_capped(o: &FiniteOrder, cap: usize) -> Result<BigCount> {
    let n = o.len();
    if n > cap || n > 24 {
        return Err(Error::Size { n, cap });
    }
    let below: Vec<u32> = (0..n)
        .map(|x| o.down(x).iter().fold(0, |m, &y| m | 1 << y))
        .collect();
    let mut memo: Vec<Option<BigUint>> = vec![None; 1 << n];
    fn go(set: u32, below: &[u32], memo: &mut [Option<BigUint>]) -> BigUint {
        if set == 0 {
            return BigUint::one();
        }
        if let Some(v) = &memo[set as usize] {
            return v.clone();
        }
        let mut total = BigUint::default();
        for x in 0..below.len() {
            // x can go first among `set` when nothing of `set` lies below it
            if set >> x & 1 == 1 && below[x] & set == 0 {
                total += go(set & !(1 << x), below, memo);
            }
        }
        memo[set as usize] = Some(total.clone());
        total
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(go(full, &below, &mut memo))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Trunk,
    Cedar,
    SeriesParallel,
    Components,
    Brute,
}

pub fn count_auto(o: &FiniteOrder) -> Result<BigCount> {
    count_auto_with_method(o).map(|(c, _)| c)
}

pub fn count_auto_with_method(o: &FiniteOrder) -> Result<(BigCount, Method)> {
    if is_trunk(o) {
        return Ok((count_trunk(&trunk_profile(o)?), Method::Trunk));
    }
    if is_cedar(o) {
        return Ok((count_cedar(o)?, Method::Cedar));
    }
    if let Ok(c) = count_sp(o) {
        return Ok((c, Method::SeriesParallel));
    }
    let comps = o.connected_components();
    if comps.len() > 1 {
        let parts = comps
            .iter()
            .map(|c| Ok((count_auto(&o.induced_unchecked(c))?, c.len())))
            .collect::<Result<Vec<_>>>()?;
        return Ok((count_disconnected(&parts), Method::Components));
    }
    Ok((count_bruteforce(o)?, Method::Brute))
}
