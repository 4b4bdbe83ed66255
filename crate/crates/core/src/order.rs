use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Lt,
    Gt,
    Inc,
}

impl Rel {
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Gt => Rel::Lt,
            r => r,
        }
    }

    pub fn is_comparable(self) -> bool {
        matches!(self, Rel::Lt | Rel::Gt)
    }

    /// Treats equality as incomparability.
    pub fn loose(self) -> Rel {
        if self == Rel::Eq {
            Rel::Inc
        } else {
            self
        }
    }
}

/// A finite partial order stored as its full comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteOrder {
    n: usize,
    cmp: Vec<Rel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDecomposition {
    pub level: Vec<usize>,
    pub height: usize,
}

impl LevelDecomposition {
    pub fn members(&self, l: usize) -> Vec<usize> {
        (0..self.level.len())
            .filter(|&i| self.level[i] == l)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.height];
        for &l in &self.level {
            s[l] += 1;
        }
        s
    }
}

impl FiniteOrder {
    pub fn from_relations(n: usize, rels: &[(usize, usize)]) -> Result<Self> {
        let mut lt = vec![false; n * n];
        for &(i, j) in rels {
            for x in [i, j] {
                if x >= n {
                    return Err(Error::Index { index: x, n });
                }
            }
            if i == j {
                return Err(Error::Cycle(i));
            }
            lt[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !lt[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if lt[k * n + j] {
                        lt[i * n + j] = true;
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| lt[i * n + i]) {
            return Err(Error::Cycle(i));
        }
        let mut cmp = vec![Rel::Inc; n * n];
        for i in 0..n {
            cmp[i * n + i] = Rel::Eq;
            for j in 0..n {
                if lt[i * n + j] {
                    cmp[i * n + j] = Rel::Lt;
                    cmp[j * n + i] = Rel::Gt;
                }
            }
        }
        Ok(FiniteOrder { n, cmp })
    }

    /// Builds an order from a strict "less than" predicate that is assumed transitive.
    pub(crate) fn from_lt_fn(n: usize, lt: impl Fn(usize, usize) -> bool) -> Self {
        let mut cmp = vec![Rel::Inc; n * n];
        for i in 0..n {
            cmp[i * n + i] = Rel::Eq;
            for j in 0..n {
                if i != j && lt(i, j) {
                    cmp[i * n + j] = Rel::Lt;
                    cmp[j * n + i] = Rel::Gt;
                }
            }
        }
        FiniteOrder { n, cmp }
    }

    pub fn chain(n: usize) -> Self {
        Self::from_lt_fn(n, |i, j| i < j)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_lt_fn(n, |_, _| false)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn cmp(&self, i: usize, j: usize) -> Rel {
        self.cmp[i * self.n + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.cmp(i, j) == Rel::Lt
    }

    pub fn inc(&self, i: usize, j: usize) -> bool {
        self.cmp(i, j) == Rel::Inc
    }

    /// Checks the three table invariants; used by tests and loaders of raw tables.
    pub fn check_table(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let r = self.cmp(i, j);
                if (i == j) != (r == Rel::Eq) || self.cmp(j, i) != r.flip() {
                    return false;
                }
                if r == Rel::Lt && (0..n).any(|k| self.lt(j, k) && !self.lt(i, k)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn lt_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.lt(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn down(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.lt(y, x)).collect()
    }

    pub fn up(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.lt(x, y)).collect()
    }

    pub fn is_total(&self) -> bool {
        self.cmp.iter().all(|&r| r != Rel::Inc)
    }

    pub fn invert(&self) -> Self {
        FiniteOrder {
            n: self.n,
            cmp: self.cmp.iter().map(|r| r.flip()).collect(),
        }
    }

    pub fn induced(&self, subset: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        for &x in subset {
            if x >= self.n {
                return Err(Error::Index {
                    index: x,
                    n: self.n,
                });
            }
            if seen[x] {
                return Err(Error::Duplicate(x));
            }
            seen[x] = true;
        }
        Ok(self.induced_unchecked(subset))
    }

    pub(crate) fn induced_unchecked(&self, subset: &[usize]) -> Self {
        let m = subset.len();
        let mut cmp = Vec::with_capacity(m * m);
        for &a in subset {
            for &b in subset {
                cmp.push(self.cmp(a, b));
            }
        }
        FiniteOrder { n: m, cmp }
    }

    /// Relabels so that old element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut cmp = vec![Rel::Eq; n * n];
        for i in 0..n {
            for j in 0..n {
                cmp[perm[i] * n + perm[j]] = self.cmp(i, j);
            }
        }
        FiniteOrder { n, cmp }
    }

    fn components_where(&self, edge: impl Fn(Rel) -> bool) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                k += 1;
                for y in 0..self.n {
                    if comp[y] == usize::MAX && edge(self.cmp(x, y)) {
                        comp[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Components of the comparability graph, each sorted, ordered by least member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_where(Rel::is_comparable)
    }

    pub(crate) fn incomparability_components(&self) -> Vec<Vec<usize>> {
        self.components_where(|r| r == Rel::Inc)
    }

    pub fn levels(&self) -> LevelDecomposition {
        let below: Vec<usize> = (0..self.n).map(|x| self.down(x).len()).collect();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| below[x]);
        let mut level = vec![0; self.n];
        for &x in &order {
            level[x] = self
                .down(x)
                .into_iter()
                .map(|y| level[y] + 1)
                .max()
                .unwrap_or(0);
        }
        let height = level.iter().map(|l| l + 1).max().unwrap_or(0);
        LevelDecomposition { level, height }
    }

    pub fn height(&self) -> usize {
        self.levels().height
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.lt_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.n).any(|z| self.lt(a, z) && self.lt(z, b)))
            .collect()
    }

    pub fn height_below_above(&self, x: usize) -> (usize, usize) {
        (self.levels().level[x], self.invert().levels().level[x])
    }

    /// For every element, the longest chains strictly below and above it.
    pub fn below_above_all(&self) -> Vec<(usize, usize)> {
        let lo = self.levels().level;
        let hi = self.invert().levels().level;
        lo.into_iter().zip(hi).collect()
    }
}
