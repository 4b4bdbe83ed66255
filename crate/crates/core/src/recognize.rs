use crate::error::{Error, Result};
use crate::order::{FiniteOrder, Rel};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Two disjoint 2-chains.
    Obs1,
    /// The "N": a<b, c<d, c<b.
    Obs2,
    /// A 2-chain and an isolated element.
    Obst,
}

impl Pattern {
    pub fn order(self) -> FiniteOrder {
        let (n, rels): (usize, &[(usize, usize)]) = match self {
            Pattern::Obs1 => (4, &[(0, 1), (2, 3)]),
            Pattern::Obs2 => (4, &[(0, 1), (2, 3), (2, 1)]),
            Pattern::Obst => (3, &[(0, 1)]),
        };
        FiniteOrder::from_relations(n, rels).unwrap()
    }
}

pub type TrunkProfile = Vec<usize>;

/// Calls `visit` on every tuple whose induced suborder equals the pattern entrywise.
/// Stops early when `visit` returns false.
pub fn for_each_occurrence(
    o: &FiniteOrder,
    p: &FiniteOrder,
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    fn go(
        o: &FiniteOrder,
        p: &FiniteOrder,
        tuple: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let k = tuple.len();
        if k == p.len() {
            return visit(tuple);
        }
        for z in 0..o.len() {
            if tuple.contains(&z) {
                continue;
            }
            if (0..k).all(|i| o.cmp(tuple[i], z) == p.cmp(i, k)) {
                tuple.push(z);
                let more = go(o, p, tuple, visit);
                tuple.pop();
                if !more {
                    return false;
                }
            }
        }
        true
    }
    go(o, p, &mut Vec::new(), &mut visit);
}

pub fn find_obstruction(o: &FiniteOrder, p: Pattern) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_occurrence(o, &p.order(), |t| {
        found = Some(t.to_vec());
        false
    });
    found
}

/// Pairwise scan: every incomparable pair must have nested directed neighbourhoods.
pub fn is_itov_fast(o: &FiniteOrder) -> bool {
    let n = o.len();
    for x in 0..n {
        for y in x + 1..n {
            if !o.inc(x, y) {
                continue;
            }
            let (mut adv_x, mut adv_y) = (false, false);
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let (a, b) = (o.cmp(z, x), o.cmp(z, y));
                if a == b {
                    continue;
                }
                if a.is_comparable() && b.is_comparable() {
                    // z on opposite sides would make x and y comparable
                    return false;
                }
                if a.is_comparable() {
                    adv_x = true;
                } else {
                    adv_y = true;
                }
                if adv_x && adv_y {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_trunk(o: &FiniteOrder) -> bool {
    let n = o.len();
    for x in 0..n {
        for y in 0..n {
            if !o.inc(x, y) {
                continue;
            }
            if (0..n).any(|z| z != x && o.inc(y, z) && o.cmp(x, z).is_comparable()) {
                return false;
            }
        }
    }
    true
}

pub fn trunk_profile(o: &FiniteOrder) -> Result<TrunkProfile> {
    if !is_trunk(o) {
        return Err(Error::NotTrunk);
    }
    Ok(o.levels().sizes())
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

pub fn neighbourhood_order(o: &FiniteOrder) -> FiniteOrder {
    let n = o.len();
    let down: Vec<Vec<usize>> = (0..n).map(|x| o.down(x)).collect();
    let up: Vec<Vec<usize>> = (0..n).map(|x| o.up(x)).collect();
    FiniteOrder::from_lt_fn(n, |x, y| {
        subset(&down[x], &down[y])
            && subset(&up[x], &up[y])
            && (down[x].len() < down[y].len() || up[x].len() < up[y].len())
    })
}

/// Elements lying on some maximum chain, if they induce a trunk.
pub fn rmf_trunk(o: &FiniteOrder) -> Option<Vec<usize>> {
    let h = o.height();
    let on_max: Vec<usize> = o
        .below_above_all()
        .into_iter()
        .enumerate()
        .filter(|&(_, (b, a))| b + a + 1 == h)
        .map(|(x, _)| x)
        .collect();
    if is_trunk(&o.induced_unchecked(&on_max)) {
        Some(on_max)
    } else {
        None
    }
}

pub fn is_up_regular(o: &FiniteOrder) -> bool {
    let lv = o.levels();
    let sizes = lv.sizes();
    (0..o.len()).all(|x| {
        let mut above = vec![0usize; lv.height];
        for y in o.up(x) {
            above[lv.level[y]] += 1;
        }
        (lv.level[x] + 1..lv.height).all(|l| above[l] == 0 || above[l] == sizes[l])
    })
}

pub fn is_regular_to_trunk(o: &FiniteOrder, x: usize, trunk: &[usize]) -> Result<bool> {
    let t = o.induced(trunk)?;
    if !is_trunk(&t) {
        return Err(Error::NotTrunk);
    }
    if x >= o.len() {
        return Err(Error::Index {
            index: x,
            n: o.len(),
        });
    }
    let lv = t.levels();
    let mut seen: Vec<Option<Rel>> = vec![None; lv.height];
    for (k, &e) in trunk.iter().enumerate() {
        let r = o.cmp(x, e).loose();
        match seen[lv.level[k]] {
            None => seen[lv.level[k]] = Some(r),
            Some(s) if s != r => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItovDecomposition {
    pub trunk: Vec<usize>,
    pub rest: Vec<usize>,
    /// Order induced on `rest`, index k standing for `rest[k]`.
    pub rest_order: FiniteOrder,
}

pub fn decompose_itov(o: &FiniteOrder) -> Result<ItovDecomposition> {
    if !is_itov_fast(o) {
        return Err(Error::NotItov);
    }
    let trunk = rmf_trunk(o).ok_or(Error::Clause(1))?;
    let rest: Vec<usize> = (0..o.len()).filter(|x| !trunk.contains(x)).collect();
    for &x in &rest {
        if !is_regular_to_trunk(o, x, &trunk)? {
            return Err(Error::Clause(2));
        }
    }
    let rest_order = o.induced_unchecked(&rest);
    if !is_itov_fast(&rest_order) {
        return Err(Error::Clause(3));
    }
    for p in [Pattern::Obs1, Pattern::Obs2] {
        let mut mixed = false;
        for_each_occurrence(o, &p.order(), |t| {
            let outside = t.iter().filter(|x| rest.contains(x)).count();
            mixed = outside >= 2 && outside < t.len();
            !mixed
        });
        if mixed {
            return Err(Error::Clause(4));
        }
    }
    Ok(ItovDecomposition {
        trunk,
        rest,
        rest_order,
    })
}

pub fn is_cedar(o: &FiniteOrder) -> bool {
    if !is_itov_fast(o) {
        return false;
    }
    let Some(trunk) = rmf_trunk(o) else {
        return false;
    };
    let rest: Vec<usize> = (0..o.len()).filter(|x| !trunk.contains(x)).collect();
    rest.iter()
        .all(|&x| rest.iter().all(|&y| x == y || o.inc(x, y)) && trunk.iter().all(|&t| !o.lt(x, t)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpKind {
    Leaf(usize),
    /// Children listed bottom to top.
    Series(Vec<SpTree>),
    Parallel(Vec<SpTree>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpTree {
    pub kind: SpKind,
    pub size: usize,
}

impl SpTree {
    pub fn leaf(x: usize) -> Self {
        SpTree {
            kind: SpKind::Leaf(x),
            size: 1,
        }
    }

    pub fn series(children: Vec<SpTree>) -> Self {
        SpTree {
            size: children.iter().map(|c| c.size).sum(),
            kind: SpKind::Series(children),
        }
    }

    pub fn parallel(children: Vec<SpTree>) -> Self {
        SpTree {
            size: children.iter().map(|c| c.size).sum(),
            kind: SpKind::Parallel(children),
        }
    }

    pub fn children(&self) -> &[SpTree] {
        match &self.kind {
            SpKind::Leaf(_) => &[],
            SpKind::Series(c) | SpKind::Parallel(c) => c,
        }
    }

    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match &self.kind {
            SpKind::Leaf(x) => out.push(*x),
            _ => self.children().iter().for_each(|c| c.collect(out)),
        }
    }

    /// Rebuilds the order on `n` elements described by the tree.
    pub fn evaluate(&self, n: usize) -> FiniteOrder {
        let mut lt = vec![false; n * n];
        self.fill(n, &mut lt);
        FiniteOrder::from_lt_fn(n, |i, j| lt[i * n + j])
    }

    fn fill(&self, n: usize, lt: &mut [bool]) {
        if let SpKind::Series(cs) = &self.kind {
            let parts: Vec<Vec<usize>> = cs.iter().map(|c| c.elements()).collect();
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    for &a in &parts[i] {
                        for &b in &parts[j] {
                            lt[a * n + b] = true;
                        }
                    }
                }
            }
        }
        self.children().iter().for_each(|c| c.fill(n, lt));
    }
}

pub fn sp_decompose(o: &FiniteOrder) -> Result<SpTree> {
    if o.is_empty() {
        return Err(Error::Param("empty order".into()));
    }
    fn rec(o: &FiniteOrder, elems: &[usize]) -> Option<SpTree> {
        if elems.len() == 1 {
            return Some(SpTree::leaf(elems[0]));
        }
        let sub = o.induced_unchecked(elems);
        let lift = |c: &Vec<usize>| c.iter().map(|&i| elems[i]).collect::<Vec<_>>();
        let comps = sub.connected_components();
        if comps.len() > 1 {
            let kids = comps
                .iter()
                .map(|c| rec(o, &lift(c)))
                .collect::<Option<_>>()?;
            return Some(SpTree::parallel(kids));
        }
        let mut layers = sub.incomparability_components();
        if layers.len() < 2 {
            return None;
        }
        layers.sort_by(|a, b| {
            if sub.lt(a[0], b[0]) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        for i in 0..layers.len() {
            for j in i + 1..layers.len() {
                let layered = layers[i]
                    .iter()
                    .all(|&a| layers[j].iter().all(|&b| sub.lt(a, b)));
                if !layered {
                    return None;
                }
            }
        }
        let kids = layers
            .iter()
            .map(|c| rec(o, &lift(c)))
            .collect::<Option<_>>()?;
        Some(SpTree::series(kids))
    }
    let all: Vec<usize> = (0..o.len()).collect();
    rec(o, &all).ok_or_else(|| {
        Error::NotSeriesParallel(find_obstruction(o, Pattern::Obs2).unwrap_or_default())
    })
}

/// Least set containing the seed that is closed under: z joins when it relates
/// differently to two members (equality read as incomparability).
pub fn forced_equal_closure(o: &FiniteOrder, seed: (usize, usize)) -> Vec<usize> {
    let n = o.len();
    let mut inside = vec![false; n];
    inside[seed.0] = true;
    inside[seed.1] = true;
    loop {
        let members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let joiners: Vec<usize> = (0..n)
            .filter(|&z| !inside[z])
            .filter(|&z| {
                let r = o.cmp(z, members[0]).loose();
                members.iter().any(|&a| o.cmp(z, a).loose() != r)
            })
            .collect();
        if joiners.is_empty() {
            return members;
        }
        for z in joiners {
            inside[z] = true;
        }
    }
}
