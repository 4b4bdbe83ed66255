use crate::error::{Error, Result};
use crate::order::FiniteOrder;
use crate::recognize::{is_itov_fast, neighbourhood_order, sp_decompose, SpKind, SpTree};
use crate::word::{anti2, total2, validate_qrep, OrderSequence, QuestionableRepresentation, Word};

fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Param(format!(
            "permutation of length {} for {n} elements",
            perm.len()
        )));
    }
    for &x in perm {
        if x >= n {
            return Err(Error::Index { index: x, n });
        }
        if seen[x] {
            return Err(Error::Duplicate(x));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Strict binary words for a total order, inserting elements in the given order.
///
/// A virtual top element keeps the candidate set non-empty. When the new word
/// collides with an existing one every word grows by one digit.
pub fn build_total_strict_binary(
    o: &FiniteOrder,
    insertion: &[usize],
) -> Result<QuestionableRepresentation> {
    if !o.is_total() {
        return Err(Error::NotTotal);
    }
    let n = o.len();
    if n == 0 {
        return Err(Error::Param("empty order".into()));
    }
    check_permutation(n, insertion)?;
    let mut words: Vec<Option<Word>> = vec![None; n];
    let mut top: Word = vec![1];
    words[insertion[0]] = Some(vec![0]);
    for &x in &insertion[1..] {
        let placed: Vec<usize> = (0..n).filter(|&y| words[y].is_some()).collect();
        let len = top.len();
        let mut cand = top.clone();
        for &y in placed.iter().filter(|&&y| o.lt(x, y)) {
            let w = words[y].as_ref().unwrap();
            for r in 0..len {
                cand[r] = cand[r].min(w[r]);
            }
        }
        let clash = placed
            .iter()
            .copied()
            .find(|&y| words[y].as_ref() == Some(&cand));
        let clash_top = cand == top;
        if clash.is_none() && !clash_top {
            words[x] = Some(cand);
            continue;
        }
        for &y in &placed {
            let w = words[y].as_mut().unwrap();
            w.push(if o.lt(y, x) { 0 } else { 1 });
        }
        top.push(1);
        let below = clash.is_some_and(|y| o.lt(y, x));
        cand.push(if below { 1 } else { 0 });
        words[x] = Some(cand);
    }
    Ok(QuestionableRepresentation::new(
        OrderSequence::uniform(total2()),
        words.into_iter().map(Option::unwrap).collect(),
    ))
}

/// Smallest-index-first topological order of `o`.
pub fn linear_extension(o: &FiniteOrder) -> Vec<usize> {
    let n = o.len();
    let mut pending: Vec<usize> = (0..n).map(|x| o.down(x).len()).collect();
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = (0..n).find(|&x| !done[x] && pending[x] == 0).unwrap();
        done[x] = true;
        out.push(x);
        for y in o.up(x) {
            pending[y] -= 1;
        }
    }
    out
}

/// Binary words of length 2(i+1) for the element ranked i by neighbourhood size.
pub fn build_itov_total_binary(o: &FiniteOrder) -> Result<QuestionableRepresentation> {
    if !is_itov_fast(o) {
        return Err(Error::NotItov);
    }
    let ranked = linear_extension(&neighbourhood_order(o));
    let mut words = vec![Word::new(); o.len()];
    for (i, &x) in ranked.iter().enumerate() {
        let w = &mut words[x];
        for &e in &ranked[..i] {
            w.extend_from_slice(if o.lt(x, e) {
                &[0, 0]
            } else if o.lt(e, x) {
                &[1, 1]
            } else {
                &[1, 0]
            });
        }
        w.extend_from_slice(&[1, 0]);
    }
    let mut q = QuestionableRepresentation::new(OrderSequence::uniform(total2()), words);
    q.min_length = 2;
    Ok(q)
}

enum Split {
    Leaf(usize),
    Node {
        series: bool,
        lo: Box<Split>,
        hi: Box<Split>,
    },
}

fn binarize(t: &SpTree) -> Split {
    match &t.kind {
        SpKind::Leaf(x) => Split::Leaf(*x),
        SpKind::Series(c) => halve(c, true),
        SpKind::Parallel(c) => halve(c, false),
    }
}

fn halve(children: &[SpTree], series: bool) -> Split {
    if children.len() == 1 {
        return binarize(&children[0]);
    }
    let total: usize = children.iter().map(|c| c.size).sum();
    let mut best = (usize::MAX, 1);
    let mut acc = 0;
    for k in 1..children.len() {
        acc += children[k - 1].size;
        let gap = (2 * acc).abs_diff(total);
        if gap < best.0 {
            best = (gap, k);
        }
    }
    let (lo, hi) = children.split_at(best.1);
    Split::Node {
        series,
        lo: Box::new(halve(lo, series)),
        hi: Box::new(halve(hi, series)),
    }
}

/// Which split kinds occur at each depth: (series, parallel).
fn kinds_by_depth(s: &Split, depth: usize, acc: &mut Vec<(bool, bool)>) {
    if let Split::Node { series, lo, hi } = s {
        if acc.len() <= depth {
            acc.push((false, false));
        }
        if *series {
            acc[depth].0 = true;
        } else {
            acc[depth].1 = true;
        }
        kinds_by_depth(lo, depth + 1, acc);
        kinds_by_depth(hi, depth + 1, acc);
    }
}

/// Width-2 words for a series-parallel order.
///
/// Each depth of the binary split tree owns one rank (total2 if only series
/// splits occur there, anti2 if only parallel ones) or a pair of ranks
/// (total2 then anti2) when both kinds occur.
pub fn build_width2(o: &FiniteOrder) -> Result<QuestionableRepresentation> {
    let tree = sp_decompose(o)?;
    let split = binarize(&tree);
    let mut kinds = Vec::new();
    kinds_by_depth(&split, 0, &mut kinds);
    let mut items = Vec::new();
    for &(s, p) in &kinds {
        match (s, p) {
            (true, false) => items.push(total2()),
            (false, true) => items.push(anti2()),
            _ => items.extend([total2(), anti2()]),
        }
    }
    let mut words = vec![Word::new(); o.len()];
    fn assign(
        s: &Split,
        depth: usize,
        prefix: &mut Word,
        kinds: &[(bool, bool)],
        words: &mut [Word],
    ) {
        match s {
            Split::Leaf(x) => words[*x] = prefix.clone(),
            Split::Node { series, lo, hi } => {
                let mixed = kinds[depth].0 && kinds[depth].1;
                let (dl, dh): (&[usize], &[usize]) = match (mixed, series) {
                    (false, _) => (&[0], &[1]),
                    (true, true) => (&[0, 0], &[1, 0]),
                    (true, false) => (&[0, 0], &[0, 1]),
                };
                for (child, digits) in [(lo, dl), (hi, dh)] {
                    let keep = prefix.len();
                    prefix.extend_from_slice(digits);
                    assign(child, depth + 1, prefix, kinds, words);
                    prefix.truncate(keep);
                }
            }
        }
    }
    if let Split::Leaf(x) = split {
        words[x] = vec![0];
        return Ok(QuestionableRepresentation::new(
            OrderSequence::new(vec![total2()]),
            words,
        ));
    }
    assign(&split, 0, &mut Word::new(), &kinds, &mut words);
    Ok(QuestionableRepresentation::new(
        OrderSequence::new(items),
        words,
    ))
}

fn is_proper_prefix(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && b.starts_with(a)
}

/// Removes every prefix pair by inserting a rank of two incomparable digits
/// at the end of the shorter word.
pub fn strictify(
    host: &FiniteOrder,
    q: &QuestionableRepresentation,
) -> Result<QuestionableRepresentation> {
    let report = validate_qrep(host, q, false)?;
    if !report.ok {
        return Err(Error::Validation(report.detail));
    }
    let mut out = q.clone();
    loop {
        let words = &out.words;
        let short = (0..words.len())
            .filter(|&x| words.iter().any(|w| is_proper_prefix(&words[x], w)))
            .min_by_key(|&x| (words[x].len(), x));
        let Some(x) = short else { break };
        let at = out.words[x].len();
        out.alphabet.materialize(out.max_len());
        out.alphabet.insert_rank(at, anti2());
        for (z, w) in out.words.iter_mut().enumerate() {
            if z == x {
                w.push(0);
            } else if w.len() >= at {
                w.insert(at, 1);
            }
        }
    }
    let report = validate_qrep(host, &out, true)?;
    if !report.ok {
        return Err(Error::Validation(report.detail));
    }
    Ok(out)
}

pub(crate) fn ceil_log2(c: usize) -> usize {
    (usize::BITS - (c.max(1) - 1).leading_zeros()) as usize
}

/// Merges per-component representations, prefixing each component with a
/// distinct code over incomparable digits. `reps[i]` covers the i-th
/// component of `o.connected_components()`, indexed by sorted position.
pub fn prefix_components(
    o: &FiniteOrder,
    reps: &[QuestionableRepresentation],
) -> Result<QuestionableRepresentation> {
    let comps = o.connected_components();
    if comps.len() != reps.len() {
        return Err(Error::Param(format!(
            "{} representations for {} components",
            reps.len(),
            comps.len()
        )));
    }
    for (c, q) in comps.iter().zip(reps) {
        let r = validate_qrep(&o.induced_unchecked(c), q, false)?;
        if !r.ok {
            return Err(Error::Validation(r.detail));
        }
    }
    if comps.len() == 1 {
        return Ok(reps[0].clone());
    }
    let bits = ceil_log2(comps.len());
    // a lone element needs no suffix once the prefix tells it apart
    let used: Vec<bool> = comps.iter().map(|c| c.len() > 1).collect();
    let len = reps
        .iter()
        .zip(&used)
        .filter(|(_, &u)| u)
        .map(|(q, _)| q.max_len())
        .max()
        .unwrap_or(0);
    let mut items = vec![anti2(); bits];
    for r in 0..len {
        let mut item: Option<&FiniteOrder> = None;
        for (q, _) in reps
            .iter()
            .zip(&used)
            .filter(|(q, &u)| u && q.max_len() > r)
        {
            let here = q.alphabet.item(r).unwrap();
            match item {
                None => item = Some(here),
                Some(prev) if prev != here => {
                    return Err(Error::Validation(format!("alphabets disagree at rank {r}")))
                }
                _ => {}
            }
        }
        items.push(item.unwrap().clone());
    }
    let mut words = vec![Word::new(); o.len()];
    for (i, (c, q)) in comps.iter().zip(reps).enumerate() {
        let code: Word = (0..bits).rev().map(|b| (i >> b) & 1).collect();
        for (k, &e) in c.iter().enumerate() {
            words[e] = code.clone();
            if used[i] {
                words[e].extend_from_slice(&q.words[k]);
            }
        }
    }
    let min_length = reps
        .iter()
        .zip(&used)
        .map(|(q, &u)| if u { q.min_length } else { 0 })
        .min()
        .unwrap_or(0)
        + bits;
    Ok(QuestionableRepresentation {
        alphabet: OrderSequence::new(items),
        words,
        min_length,
    })
}
