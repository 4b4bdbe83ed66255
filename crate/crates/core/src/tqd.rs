use crate::build::{ceil_log2, strictify};
use crate::error::{Error, Result};
use crate::order::{FiniteOrder, Rel};
use crate::word::{validate_qrep, QuestionableRepresentation, Report};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

/// Adjacency types. `None` is the default type: incomparable for orders,
/// non-edge for graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Adj {
    None,
    Edge,
    Lt,
    Gt,
}

impl Adj {
    pub fn flip(self) -> Adj {
        match self {
            Adj::Lt => Adj::Gt,
            Adj::Gt => Adj::Lt,
            t => t,
        }
    }

    pub fn from_rel(r: Rel) -> Adj {
        match r {
            Rel::Lt => Adj::Lt,
            Rel::Gt => Adj::Gt,
            _ => Adj::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyStructure {
    n: usize,
    table: Vec<Adj>,
}

impl AdjacencyStructure {
    pub fn new(n: usize) -> Self {
        AdjacencyStructure {
            n,
            table: vec![Adj::None; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Adj {
        self.table[i * self.n + j]
    }

    /// Sets the type of (i, j) and the flipped type of (j, i).
    pub fn set(&mut self, i: usize, j: usize, t: Adj) {
        assert!(i != j, "no self adjacency");
        self.table[i * self.n + j] = t;
        self.table[j * self.n + i] = t.flip();
    }

    pub fn from_order(o: &FiniteOrder) -> Self {
        let mut s = Self::new(o.len());
        for (a, b) in o.lt_pairs() {
            s.set(a, b, Adj::Lt);
        }
        s
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::new(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Index { index: a.max(b), n });
            }
            if a == b {
                return Err(Error::Param(format!("loop at {a}")));
            }
            s.set(a, b, Adj::Edge);
        }
        Ok(s)
    }

    /// Reads the structure back as an order; fails unless it uses only
    /// order types and is transitive.
    pub fn to_order(&self) -> Result<FiniteOrder> {
        let mut rels = Vec::new();
        for (a, b, t) in self.pairs() {
            match t {
                Adj::Lt => rels.push((a, b)),
                Adj::Gt => rels.push((b, a)),
                _ => {
                    return Err(Error::Validation(format!(
                        "pair ({a}, {b}) is not an order type"
                    )))
                }
            }
        }
        let o = FiniteOrder::from_relations(self.n, &rels)?;
        if Self::from_order(&o) != *self {
            return Err(Error::Validation("relation is not transitive".into()));
        }
        Ok(o)
    }

    /// Non-default pairs (i < j) with their types.
    pub fn pairs(&self) -> Vec<(usize, usize, Adj)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let t = self.get(i, j);
                if t != Adj::None {
                    out.push((i, j, t));
                }
            }
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|p| p.2 == Adj::Edge)
            .map(|(a, b, _)| (a, b))
            .collect()
    }

    /// Relabels element i as perm[i].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut s = Self::new(self.n);
        for (a, b, t) in self.pairs() {
            s.set(perm[a], perm[b], t);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueTerm {
    Make(usize),
    Union(Box<CliqueTerm>, Box<CliqueTerm>),
    /// Gives type t to every (label a, label b) vertex pair.
    Add(usize, usize, Adj, Box<CliqueTerm>),
    Relabel(usize, usize, Box<CliqueTerm>),
}

impl CliqueTerm {
    pub fn union(a: CliqueTerm, b: CliqueTerm) -> Self {
        CliqueTerm::Union(Box::new(a), Box::new(b))
    }

    pub fn add(a: usize, b: usize, t: Adj, c: CliqueTerm) -> Self {
        CliqueTerm::Add(a, b, t, Box::new(c))
    }

    pub fn relabel(from: usize, to: usize, c: CliqueTerm) -> Self {
        CliqueTerm::Relabel(from, to, Box::new(c))
    }

    /// Evaluates the term. Vertices are numbered in left-to-right leaf
    /// order; the second value holds each vertex's final label.
    pub fn eval(&self) -> Result<(AdjacencyStructure, Vec<usize>)> {
        let mut labels = Vec::new();
        let mut adds = Vec::new();
        self.eval_into(&mut labels, &mut adds)?;
        let mut s = AdjacencyStructure::new(labels.len());
        for (u, v, t) in adds {
            s.set(u, v, t);
        }
        Ok((s, labels))
    }

    fn eval_into(
        &self,
        labels: &mut Vec<usize>,
        adds: &mut Vec<(usize, usize, Adj)>,
    ) -> Result<Range<usize>> {
        let check = |l: usize| {
            if l == 0 {
                Err(Error::Label("labels start at 1".into()))
            } else {
                Ok(())
            }
        };
        match self {
            CliqueTerm::Make(l) => {
                check(*l)?;
                labels.push(*l);
                Ok(labels.len() - 1..labels.len())
            }
            CliqueTerm::Union(a, b) => {
                let r1 = a.eval_into(labels, adds)?;
                let r2 = b.eval_into(labels, adds)?;
                Ok(r1.start..r2.end)
            }
            CliqueTerm::Add(a, b, t, c) => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::Label(format!("add between label {a} and itself")));
                }
                let r = c.eval_into(labels, adds)?;
                for u in r.clone() {
                    for v in r.clone() {
                        if labels[u] == *a && labels[v] == *b {
                            adds.push((u, v, *t));
                        }
                    }
                }
                Ok(r)
            }
            CliqueTerm::Relabel(from, to, c) => {
                check(*from)?;
                check(*to)?;
                let r = c.eval_into(labels, adds)?;
                for u in r.clone() {
                    if labels[u] == *from {
                        labels[u] = *to;
                    }
                }
                Ok(r)
            }
        }
    }

    /// Nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            CliqueTerm::Make(_) => 1,
            CliqueTerm::Union(a, b) => 1 + a.depth().max(b.depth()),
            CliqueTerm::Add(_, _, _, c) | CliqueTerm::Relabel(_, _, c) => 1 + c.depth(),
        }
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                CliqueTerm::Make(l) => {
                    out.insert(*l);
                }
                CliqueTerm::Union(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                CliqueTerm::Add(a, b, _, c) | CliqueTerm::Relabel(a, b, c) => {
                    out.insert(*a);
                    out.insert(*b);
                    stack.push(c);
                }
            }
        }
        out
    }
}

/// l·(k(k−1) + ⌈lg(k−1)⌉) + ⌈lg n⌉ + (l−1)(k−1)
pub fn clique_depth_bound(n: usize, k: usize, l: usize) -> usize {
    let k1 = k.saturating_sub(1);
    l * (k * k1 + ceil_log2(k1)) + ceil_log2(n) + l.saturating_sub(1) * k1
}

/// Clique-width term for the order a questionable representation describes.
/// Returns the term and, for each vertex of its evaluation, the host element.
pub fn qrep_to_clique(
    host: &FiniteOrder,
    q: &QuestionableRepresentation,
) -> Result<(CliqueTerm, Vec<usize>)> {
    let report = validate_qrep(host, q, false)?;
    if !report.ok {
        return Err(Error::Validation(report.detail));
    }
    if host.is_empty() {
        return Err(Error::Param("empty order".into()));
    }
    let k = q.used_width().max(1);
    let (t, leaves, _) = class_term(q, k, (0..host.len()).collect(), 0, None);
    Ok((t, leaves))
}

type Part = (CliqueTerm, Vec<usize>, BTreeSet<usize>);

fn class_term(
    q: &QuestionableRepresentation,
    k: usize,
    elems: Vec<usize>,
    r: usize,
    out: Option<usize>,
) -> Part {
    if elems.len() == 1 {
        let l = out.unwrap_or(1);
        return (CliqueTerm::Make(l), elems, BTreeSet::from([l]));
    }
    let ended = elems.iter().copied().find(|&e| q.words[e].len() == r);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &elems {
        if let Some(&d) = q.words[e].get(r) {
            classes.entry(d).or_default().push(e);
        }
    }
    if ended.is_none() && classes.len() == 1 {
        let only = classes.into_values().next().unwrap();
        return class_term(q, k, only, r + 1, out);
    }
    let item = q.alphabet.item(r).unwrap();
    let mut parts: Vec<Part> = classes
        .iter()
        .map(|(&d, c)| class_term(q, k, c.clone(), r + 1, Some(d + 1)))
        .collect();
    let free = (1..=k).find(|l| !classes.contains_key(&(l - 1)));
    let mut late = None;
    if let Some(e) = ended {
        match free {
            Some(l) => parts.push((CliqueTerm::Make(l), vec![e], BTreeSet::from([l]))),
            None => late = Some(e),
        }
    }
    let related = |a: usize, b: usize| {
        classes.contains_key(&(a - 1)) && classes.contains_key(&(b - 1)) && a != b
    };
    let (mut term, mut leaves, mut labels) = join(parts, &|a, b| {
        if related(a, b) {
            item.cmp(a - 1, b - 1)
        } else {
            Rel::Inc
        }
    });
    if let Some(e) = late {
        term = CliqueTerm::union(term, CliqueTerm::Make(1));
        leaves.push(e);
        labels.insert(1);
    }
    if let Some(o) = out {
        for &l in &labels {
            if l != o {
                term = CliqueTerm::relabel(l, o, term);
            }
        }
        labels = BTreeSet::from([o]);
    }
    (term, leaves, labels)
}

/// Balanced union of the parts, with the label relations added at each join.
fn join(mut parts: Vec<Part>, rel: &dyn Fn(usize, usize) -> Rel) -> Part {
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let right = parts.split_off(parts.len() / 2);
    let (lt, mut ll, mut lls) = join(parts, rel);
    let (rt, rl, rls) = join(right, rel);
    let mut term = CliqueTerm::union(lt, rt);
    for &a in &lls {
        for &b in &rls {
            match rel(a, b) {
                Rel::Lt => term = CliqueTerm::add(a, b, Adj::Lt, term),
                Rel::Gt => term = CliqueTerm::add(b, a, Adj::Lt, term),
                _ => {}
            }
        }
    }
    ll.extend(rl);
    lls.extend(rls);
    (term, ll, lls)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        (0..self.bags.len())
            .map(|t| path_len(&self.parent, t))
            .max()
            .unwrap_or(0)
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(t);
            }
        }
        ch
    }

    pub fn check(&self, x: &AdjacencyStructure) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDecomposition(m));
        let m = self.bags.len();
        if self.parent.len() != m || m == 0 {
            return bad("bag and parent lists differ or are empty".into());
        }
        check_forest(&self.parent).map_err(Error::InvalidDecomposition)?;
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return bad("needs exactly one root".into());
        }
        let n = x.len();
        let mut holds = vec![vec![false; m]; n];
        for (t, bag) in self.bags.iter().enumerate() {
            for &e in bag {
                if e >= n {
                    return bad(format!("bag {t} holds unknown element {e}"));
                }
                holds[e][t] = true;
            }
        }
        for (e, h) in holds.iter().enumerate() {
            // a connected node set has exactly one node whose parent is outside it
            let tops = (0..m)
                .filter(|&t| h[t] && self.parent[t].is_none_or(|p| !h[p]))
                .count();
            if tops != 1 {
                return bad(format!(
                    "nodes holding element {e} are missing or disconnected"
                ));
            }
        }
        for (a, b, _) in x.pairs() {
            if !(0..m).any(|t| holds[a][t] && holds[b][t]) {
                return bad(format!("no bag covers ({a}, {b})"));
            }
        }
        Ok(())
    }
}

fn check_forest(parent: &[Option<usize>]) -> std::result::Result<(), String> {
    for t in 0..parent.len() {
        let mut at = t;
        let mut steps = 0;
        while let Some(p) = parent[at] {
            if p >= parent.len() {
                return Err(format!("node {at} has unknown parent {p}"));
            }
            at = p;
            steps += 1;
            if steps > parent.len() {
                return Err(format!("node {t} lies on a cycle"));
            }
        }
    }
    Ok(())
}

fn path_len(parent: &[Option<usize>], mut t: usize) -> usize {
    let mut len = 1;
    while let Some(p) = parent[t] {
        t = p;
        len += 1;
    }
    len
}

/// Tree decomposition from an elimination ordering: each vertex's bag holds
/// it and its later neighbours after fill-in.
pub fn tree_decomposition_from_elimination(
    x: &AdjacencyStructure,
    order: &[usize],
) -> Result<TreeDecomposition> {
    let n = x.len();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(Error::Param(
            "elimination order must be a permutation".into(),
        ));
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut nb: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, b, _) in x.pairs() {
        nb[a].insert(b);
        nb[b].insert(a);
    }
    let mut bags = vec![Vec::new(); n];
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<usize> = nb[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    nb[a].insert(b);
                }
            }
        }
        parent[pos[v]] = later.iter().map(|&u| pos[u]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags[pos[v]] = bag;
    }
    // join the roots of disconnected parts under the last node
    for t in 0..n.saturating_sub(1) {
        if parent[t].is_none() {
            parent[t] = Some(n - 1);
        }
    }
    Ok(TreeDecomposition { parent, bags })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    /// element -> vertex of `target`
    pub image: BTreeMap<usize, usize>,
    pub target: AdjacencyStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TqdNode {
    Inner {
        parent: Option<usize>,
        run: Vec<Mapping>,
    },
    Leaf {
        parent: Option<usize>,
        element: usize,
    },
}

impl TqdNode {
    pub fn parent(&self) -> Option<usize> {
        match self {
            TqdNode::Inner { parent, .. } | TqdNode::Leaf { parent, .. } => *parent,
        }
    }

    fn set_parent(&mut self, p: usize) {
        match self {
            TqdNode::Inner { parent, .. } | TqdNode::Leaf { parent, .. } => *parent = Some(p),
        }
    }

    pub fn run(&self) -> &[Mapping] {
        match self {
            TqdNode::Inner { run, .. } => run,
            TqdNode::Leaf { .. } => &[],
        }
    }
}

/// Tree-questionable decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tqd {
    pub nodes: Vec<TqdNode>,
}

impl Tqd {
    fn parents(&self) -> Vec<Option<usize>> {
        self.nodes.iter().map(|t| t.parent()).collect()
    }

    pub fn leaves(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, t)| match t {
                TqdNode::Leaf { element, .. } => Some((i, *element)),
                _ => None,
            })
            .collect()
    }

    pub fn is_bijective(&self) -> bool {
        let mut els: Vec<usize> = self.leaves().into_iter().map(|l| l.1).collect();
        let total = els.len();
        els.sort_unstable();
        els.dedup();
        els.len() == total
    }

    /// Largest mapping target.
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .flat_map(|t| t.run())
            .map(|m| m.target.len())
            .max()
            .unwrap_or(0)
    }

    /// (structural, logical): nodes on the longest root path, and the largest
    /// sum of run lengths along a root path.
    pub fn depths(&self) -> (usize, usize) {
        let parents = self.parents();
        let mut alpha = 0;
        let mut beta = 0;
        for t in 0..self.nodes.len() {
            alpha = alpha.max(path_len(&parents, t));
            let mut sum = self.nodes[t].run().len();
            let mut at = t;
            while let Some(p) = parents[at] {
                sum += self.nodes[p].run().len();
                at = p;
            }
            beta = beta.max(sum);
        }
        (alpha, beta)
    }

    /// Renumbers nodes in preorder, children in their current index order.
    pub fn into_preorder(self) -> Tqd {
        let m = self.nodes.len();
        let mut ch = vec![Vec::new(); m];
        let mut roots = Vec::new();
        for (i, t) in self.nodes.iter().enumerate() {
            match t.parent() {
                Some(p) => ch[p].push(i),
                None => roots.push(i),
            }
        }
        let mut order = Vec::with_capacity(m);
        let mut stack: Vec<usize> = roots.into_iter().rev().collect();
        while let Some(t) = stack.pop() {
            order.push(t);
            stack.extend(ch[t].iter().rev());
        }
        let mut new_id = vec![0; m];
        for (i, &t) in order.iter().enumerate() {
            new_id[t] = i;
        }
        let mut nodes: Vec<Option<TqdNode>> = self.nodes.into_iter().map(Some).collect();
        let out = order
            .iter()
            .map(|&t| {
                let mut node = nodes[t].take().unwrap();
                match &mut node {
                    TqdNode::Inner { parent, .. } | TqdNode::Leaf { parent, .. } => {
                        *parent = parent.map(|p| new_id[p]);
                    }
                }
                node
            })
            .collect();
        Tqd { nodes: out }
    }
}

/// Checks every element pair against the decomposition. With `strict`, a pair
/// whose runs never tell it apart fails; otherwise it reads as the default type.
pub fn tqd_validate(x: &AdjacencyStructure, d: &Tqd, strict: bool) -> Result<Report> {
    let n = x.len();
    let m = d.nodes.len();
    let parents = d.parents();
    if let Err(e) = check_forest(&parents) {
        return Ok(Report {
            ok: false,
            offending: None,
            detail: e,
        });
    }
    let shape_fail = |detail: String| {
        Ok(Report {
            ok: false,
            offending: None,
            detail,
        })
    };
    for (i, t) in d.nodes.iter().enumerate() {
        if let Some(p) = t.parent() {
            if matches!(d.nodes[p], TqdNode::Leaf { .. }) {
                return shape_fail(format!("node {i} hangs below leaf {p}"));
            }
        }
    }
    let mut leaves_of = vec![Vec::new(); n];
    for (i, e) in d.leaves() {
        if e >= n {
            return shape_fail(format!("leaf {i} names unknown element {e}"));
        }
        leaves_of[e].push(i);
    }
    if let Some(e) = leaves_of.iter().position(|l| l.is_empty()) {
        return Err(Error::Coverage(e));
    }
    // ancestors[e][t]: t is an inner node above some leaf of e
    let mut ancestors = vec![vec![false; m]; n];
    for (e, ls) in leaves_of.iter().enumerate() {
        for &l in ls {
            let mut at = l;
            while let Some(p) = parents[at] {
                ancestors[e][p] = true;
                at = p;
            }
        }
    }
    for (t, node) in d.nodes.iter().enumerate() {
        let below: Vec<usize> = (0..n).filter(|&e| ancestors[e][t]).collect();
        for (s, mp) in node.run().iter().enumerate() {
            if !mp.image.keys().copied().eq(below.iter().copied()) {
                return shape_fail(format!(
                    "mapping {s} of node {t} does not match the leaves below it"
                ));
            }
            if mp.image.values().any(|&v| v >= mp.target.len()) {
                return shape_fail(format!(
                    "mapping {s} of node {t} points outside its structure"
                ));
            }
        }
    }
    let mut has_child_in = vec![false; m];
    for u in 0..n {
        for v in u + 1..n {
            let common: Vec<bool> = (0..m).map(|t| ancestors[u][t] && ancestors[v][t]).collect();
            has_child_in.iter_mut().for_each(|h| *h = false);
            for t in 0..m {
                if let (true, Some(p)) = (common[t], parents[t]) {
                    has_child_in[p] = true;
                }
            }
            let want = x.get(u, v);
            let mut minimal = (0..m).filter(|&t| common[t] && !has_child_in[t]).peekable();
            if minimal.peek().is_none() {
                return Ok(Report::fail(u, v, "no common ancestor".into()));
            }
            for low in minimal {
                let got = first_question(d, &parents, low, u, v);
                let got = match got {
                    Some(t) => t,
                    None if strict => {
                        return Ok(Report::fail(u, v, format!("no question above node {low}")))
                    }
                    None => Adj::None,
                };
                if got != want {
                    return Ok(Report::fail(
                        u,
                        v,
                        format!("path from node {low} gives {got:?}, structure has {want:?}"),
                    ));
                }
            }
        }
    }
    Ok(Report::pass())
}

fn first_question(
    d: &Tqd,
    parents: &[Option<usize>],
    low: usize,
    u: usize,
    v: usize,
) -> Option<Adj> {
    let mut at = Some(low);
    while let Some(t) = at {
        for mp in d.nodes[t].run() {
            let (a, b) = (mp.image[&u], mp.image[&v]);
            if a != b {
                return Some(mp.target.get(a, b));
            }
        }
        at = parents[t];
    }
    None
}

/// One inner node whose run follows the ranks of a strict version of `q`.
pub fn tqd_from_qrep(host: &FiniteOrder, q: &QuestionableRepresentation) -> Result<Tqd> {
    let s = strictify(host, q)?;
    let len = s.max_len();
    let run = (0..len)
        .map(|r| Mapping {
            image: s
                .words
                .iter()
                .enumerate()
                .map(|(e, w)| (e, w.get(r).copied().unwrap_or(0)))
                .collect(),
            target: AdjacencyStructure::from_order(s.alphabet.item(r).unwrap()),
        })
        .collect();
    let mut nodes = vec![TqdNode::Inner { parent: None, run }];
    nodes.extend((0..host.len()).map(|e| TqdNode::Leaf {
        parent: Some(0),
        element: e,
    }));
    Ok(Tqd { nodes })
}

/// Each tree node maps its bag to itself and everything else below it to one
/// extra vertex of default type. Leaves sit at the lowest nodes holding each
/// element, so the result is usually not bijective.
pub fn tqd_from_tree_decomposition(x: &AdjacencyStructure, td: &TreeDecomposition) -> Result<Tqd> {
    td.check(x)?;
    let m = td.bags.len();
    let ch = td.children();
    let mut nodes: Vec<TqdNode> = td
        .parent
        .iter()
        .map(|&p| TqdNode::Inner {
            parent: p,
            run: Vec::new(),
        })
        .collect();
    let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for e in 0..x.len() {
        let holds: Vec<bool> = td.bags.iter().map(|b| b.contains(&e)).collect();
        for t in 0..m {
            if holds[t] && !ch[t].iter().any(|&c| holds[c]) {
                nodes.push(TqdNode::Leaf {
                    parent: Some(t),
                    element: e,
                });
                let mut at = Some(t);
                while let Some(a) = at {
                    below[a].insert(e);
                    at = td.parent[a];
                }
            }
        }
    }
    for t in 0..m {
        let mut bag = td.bags[t].clone();
        bag.sort_unstable();
        bag.dedup();
        let sink = bag.len();
        let mut target = AdjacencyStructure::new(sink + 1);
        for i in 0..sink {
            for j in i + 1..sink {
                target.set(i, j, x.get(bag[i], bag[j]));
            }
        }
        let image = below[t]
            .iter()
            .map(|&e| (e, bag.binary_search(&e).unwrap_or(sink)))
            .collect();
        if let TqdNode::Inner { run, .. } = &mut nodes[t] {
            run.push(Mapping { image, target });
        }
    }
    Ok(Tqd { nodes }.into_preorder())
}

/// One inner node per union, mapping its left and right label classes to
/// separate vertices; the adds directly above the union fill in the types.
pub fn tqd_from_clique_term(x: &AdjacencyStructure, t: &CliqueTerm) -> Result<Tqd> {
    let (s, _) = t.eval()?;
    if s != *x {
        return Err(Error::Validation(
            "term does not evaluate to the structure".into(),
        ));
    }
    let mut b = TermWalk {
        labels: Vec::new(),
        nodes: Vec::new(),
    };
    b.walk(t, Vec::new())?;
    Ok(Tqd { nodes: b.nodes })
}

struct TermWalk {
    labels: Vec<usize>,
    nodes: Vec<TqdNode>,
}

impl TermWalk {
    /// Returns the vertex range and the decomposition node of the subterm.
    fn walk(
        &mut self,
        t: &CliqueTerm,
        mut adds: Vec<(usize, usize, Adj)>,
    ) -> Result<(Range<usize>, usize)> {
        let not_compact = |what: &str| Err(Error::NotCompact(format!("add above {what}")));
        match t {
            CliqueTerm::Make(l) => {
                if !adds.is_empty() {
                    return not_compact("a vertex");
                }
                self.labels.push(*l);
                let v = self.labels.len() - 1;
                self.nodes.push(TqdNode::Leaf {
                    parent: None,
                    element: v,
                });
                Ok((v..v + 1, self.nodes.len() - 1))
            }
            CliqueTerm::Add(a, b, ty, c) => {
                adds.push((*a, *b, *ty));
                self.walk(c, adds)
            }
            CliqueTerm::Relabel(from, to, c) => {
                if !adds.is_empty() {
                    return not_compact("a relabel");
                }
                let (r, node) = self.walk(c, Vec::new())?;
                for u in r.clone() {
                    if self.labels[u] == *from {
                        self.labels[u] = *to;
                    }
                }
                Ok((r, node))
            }
            CliqueTerm::Union(l, r) => {
                let id = self.nodes.len();
                self.nodes.push(TqdNode::Inner {
                    parent: None,
                    run: Vec::new(),
                });
                let (r1, n1) = self.walk(l, Vec::new())?;
                let (r2, n2) = self.walk(r, Vec::new())?;
                self.nodes[n1].set_parent(id);
                self.nodes[n2].set_parent(id);
                let side = |r: &Range<usize>| -> BTreeSet<usize> {
                    r.clone().map(|u| self.labels[u]).collect()
                };
                let (ls, rs) = (side(&r1), side(&r2));
                let keys: BTreeSet<(bool, usize)> = ls
                    .iter()
                    .map(|&a| (false, a))
                    .chain(rs.iter().map(|&b| (true, b)))
                    .collect();
                let slot: BTreeMap<(bool, usize), usize> =
                    keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
                let mut target = AdjacencyStructure::new(slot.len());
                // adds were collected top-down; apply innermost first
                for &(a, b, ty) in adds.iter().rev() {
                    if (ls.contains(&a) && ls.contains(&b)) || (rs.contains(&a) && rs.contains(&b))
                    {
                        return Err(Error::NotCompact(format!(
                            "add({a}, {b}) joins vertices on one side of a union"
                        )));
                    }
                    if ls.contains(&a) && rs.contains(&b) {
                        target.set(slot[&(false, a)], slot[&(true, b)], ty);
                    } else if rs.contains(&a) && ls.contains(&b) {
                        target.set(slot[&(true, a)], slot[&(false, b)], ty);
                    }
                }
                let image = r1
                    .clone()
                    .map(|u| (u, slot[&(false, self.labels[u])]))
                    .chain(r2.clone().map(|u| (u, slot[&(true, self.labels[u])])))
                    .collect();
                if let TqdNode::Inner { run, .. } = &mut self.nodes[id] {
                    run.push(Mapping { image, target });
                }
                Ok((r1.start..r2.end, id))
            }
        }
    }
}

fn inner(nodes: &mut Vec<TqdNode>, parent: Option<usize>) -> usize {
    nodes.push(TqdNode::Inner {
        parent,
        run: Vec::new(),
    });
    nodes.len() - 1
}

fn leaf(nodes: &mut Vec<TqdNode>, parent: Option<usize>, element: usize) -> usize {
    nodes.push(TqdNode::Leaf { parent, element });
    nodes.len() - 1
}

fn set_run(nodes: &mut [TqdNode], id: usize, new: Vec<Mapping>) {
    if let TqdNode::Inner { run, .. } = &mut nodes[id] {
        *run = new;
    }
}

fn mapping(
    size: usize,
    image: impl IntoIterator<Item = (usize, usize)>,
    types: &[(usize, usize, Adj)],
) -> Mapping {
    let mut target = AdjacencyStructure::new(size);
    for &(a, b, t) in types {
        target.set(a, b, t);
    }
    Mapping {
        image: image.into_iter().collect(),
        target,
    }
}

/// Path of vertices in order, consecutive ones adjacent.
fn path_tqd(nodes: &mut Vec<TqdNode>, parent: Option<usize>, verts: &[usize]) -> usize {
    match verts.len() {
        1 => leaf(nodes, parent, verts[0]),
        2 => {
            let id = inner(nodes, parent);
            leaf(nodes, Some(id), verts[0]);
            leaf(nodes, Some(id), verts[1]);
            let m = mapping(2, [(verts[0], 0), (verts[1], 1)], &[(0, 1, Adj::Edge)]);
            set_run(nodes, id, vec![m]);
            id
        }
        3 => {
            let id = inner(nodes, parent);
            for &v in verts {
                leaf(nodes, Some(id), v);
            }
            let ends_vs_middle = mapping(
                2,
                [(verts[0], 0), (verts[1], 1), (verts[2], 0)],
                &[(0, 1, Adj::Edge)],
            );
            let ends_apart = mapping(2, [(verts[0], 0), (verts[1], 0), (verts[2], 1)], &[]);
            set_run(nodes, id, vec![ends_vs_middle, ends_apart]);
            id
        }
        len => {
            let id = inner(nodes, parent);
            let (l, r) = verts.split_at(len / 2);
            path_tqd(nodes, Some(id), l);
            path_tqd(nodes, Some(id), r);
            let (x, y) = (l[l.len() - 1], r[0]);
            let boundary = mapping(
                3,
                verts.iter().map(|&v| {
                    (
                        v,
                        if v == x {
                            0
                        } else if v == y {
                            1
                        } else {
                            2
                        },
                    )
                }),
                &[(0, 1, Adj::Edge)],
            );
            let sides = mapping(
                2,
                l.iter().map(|&v| (v, 0)).chain(r.iter().map(|&v| (v, 1))),
                &[],
            );
            set_run(nodes, id, vec![boundary, sides]);
            id
        }
    }
}

/// Bijective decomposition of grid(p, q) of width at most 3: columns are
/// paths split in halves, and column blocks are joined by telling boundary
/// rows apart through the bits of their row index.
pub fn tqd_grid(p: usize, q: usize) -> Result<Tqd> {
    if p == 0 || q == 0 {
        return Err(Error::Param("grid sides must be at least 1".into()));
    }
    let id = |r: usize, c: usize| r * q + c;
    let mut nodes = Vec::new();
    if p == 1 {
        let row: Vec<usize> = (0..q).collect();
        path_tqd(&mut nodes, None, &row);
        return Ok(Tqd { nodes });
    }
    fn columns(
        nodes: &mut Vec<TqdNode>,
        parent: Option<usize>,
        p: usize,
        cols: Range<usize>,
        id: &dyn Fn(usize, usize) -> usize,
    ) -> usize {
        if cols.len() == 1 {
            let col: Vec<usize> = (0..p).map(|r| id(r, cols.start)).collect();
            return path_tqd(nodes, parent, &col);
        }
        let node = inner(nodes, parent);
        let mid = cols.start + cols.len() / 2;
        columns(nodes, Some(node), p, cols.start..mid, id);
        columns(nodes, Some(node), p, mid..cols.end, id);
        let (lb, rb) = (mid - 1, mid);
        let cells: Vec<(usize, usize)> = (0..p)
            .flat_map(|r| cols.clone().map(move |c| (r, c)))
            .collect();
        let mut run = Vec::new();
        for bit in 0..ceil_log2(p) {
            let image = cells.iter().map(|&(r, c)| {
                let v = if c == lb || c == rb {
                    r >> bit & 1
                } else if c < mid {
                    2
                } else {
                    0
                };
                (id(r, c), v)
            });
            run.push(mapping(3, image, &[]));
        }
        let image = cells.iter().map(|&(r, c)| {
            (
                id(r, c),
                if c == lb {
                    0
                } else if c == rb {
                    1
                } else {
                    2
                },
            )
        });
        run.push(mapping(3, image, &[(0, 1, Adj::Edge)]));
        set_run(nodes, node, run);
        node
    }
    columns(&mut nodes, None, p, 0..q, &id);
    Ok(Tqd { nodes })
}

/// Width-2 decomposition adding one element per node: the node for element i
/// tells i apart from each earlier element in turn.
pub fn linear_tqd(x: &AdjacencyStructure) -> Result<Tqd> {
    let n = x.len();
    if n < 2 {
        return Err(Error::Param("needs at least two elements".into()));
    }
    let mut nodes = Vec::new();
    let mut parent = None;
    for i in (1..n).rev() {
        let id = inner(&mut nodes, parent);
        let run = (0..i)
            .map(|f| {
                mapping(
                    2,
                    (0..=i).map(|e| (e, usize::from(e == f))),
                    &[(0, 1, x.get(i, f))],
                )
            })
            .collect();
        set_run(&mut nodes, id, run);
        if i == 1 {
            leaf(&mut nodes, Some(id), 0);
        }
        leaf(&mut nodes, Some(id), i);
        parent = Some(id);
    }
    Ok(Tqd { nodes }.into_preorder())
}
