//! Line-oriented text formats. Every printer's output parses back to an equal
//! value. `#` starts a comment anywhere on a line.

use anyhow::{anyhow, bail, ensure, Context, Result};
use qorder::tqd::{Adj, AdjacencyStructure, CliqueTerm, Mapping, Tqd, TqdNode, TreeDecomposition};
use qorder::word::{anti2, total2, OrderSequence, QuestionableRepresentation};
use qorder::FiniteOrder;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Non-empty lines split into tokens, with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap();
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| anyhow!("expected a number, found `{tok}`"))
}

fn keyed<'a>(tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| anyhow!("expected `{key}=...`, found `{tok}`"))
}

fn parent_field(tok: &str) -> Result<Option<usize>> {
    match keyed(tok, "parent")? {
        "-" => Ok(None),
        p => num(p).map(Some),
    }
}

fn parent_text(p: Option<usize>) -> String {
    p.map_or("-".into(), |p| p.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedOrder {
    pub order: FiniteOrder,
    pub names: BTreeMap<usize, String>,
}

impl From<FiniteOrder> for NamedOrder {
    fn from(order: FiniteOrder) -> Self {
        NamedOrder {
            order,
            names: BTreeMap::new(),
        }
    }
}

pub fn parse_order(text: &str) -> Result<NamedOrder> {
    let mut it = lines(text);
    let (_, head) = it.next().ok_or_else(|| anyhow!("empty order file"))?;
    ensure!(
        head.len() == 2 && head[0] == "order",
        "first line must be `order <n>`"
    );
    let n = num(head[1])?;
    let mut names = BTreeMap::new();
    let mut rels = Vec::new();
    for (ln, t) in it {
        let res: Result<()> = (|| {
            match t.as_slice() {
                ["name", i, tok] => {
                    let i = num(i)?;
                    ensure!(i < n, "name for element {i} outside 0..{n}");
                    names.insert(i, tok.to_string());
                }
                ["lt", i, j] => rels.push((num(i)?, num(j)?)),
                _ => bail!("unknown line `{}`", t.join(" ")),
            }
            Ok(())
        })();
        res.with_context(|| format!("line {ln}"))?;
    }
    let order = FiniteOrder::from_relations(n, &rels)?;
    Ok(NamedOrder { order, names })
}

pub fn print_order(o: &NamedOrder) -> String {
    let mut s = format!("order {}\n", o.order.len());
    for (i, name) in &o.names {
        writeln!(s, "name {i} {name}").unwrap();
    }
    for (a, b) in o.order.cover_pairs() {
        writeln!(s, "lt {a} {b}").unwrap();
    }
    s
}

fn parse_alphabet(toks: &[&str]) -> Result<FiniteOrder> {
    match toks {
        ["total2"] => Ok(total2()),
        ["anti2"] => Ok(anti2()),
        ["custom{", k, ";", rest @ .., "}"] => {
            let k = num(k)?;
            ensure!(
                rest.len() % 3 == 0,
                "custom alphabet relations come as `lt i j`"
            );
            let mut rels = Vec::new();
            for c in rest.chunks(3) {
                ensure!(c[0] == "lt", "expected `lt`, found `{}`", c[0]);
                rels.push((num(c[1])?, num(c[2])?));
            }
            Ok(FiniteOrder::from_relations(k, &rels)?)
        }
        _ => bail!("unknown alphabet `{}`", toks.join(" ")),
    }
}

fn alphabet_text(o: &FiniteOrder) -> String {
    if *o == total2() {
        return "total2".into();
    }
    if *o == anti2() {
        return "anti2".into();
    }
    let mut s = format!("custom{{ {} ;", o.len());
    for (a, b) in o.cover_pairs() {
        write!(s, " lt {a} {b}").unwrap();
    }
    s + " }"
}

pub fn parse_qrep(text: &str) -> Result<QuestionableRepresentation> {
    let mut it = lines(text);
    let (_, head) = it.next().ok_or_else(|| anyhow!("empty qrep file"))?;
    ensure!(
        head.len() == 3 && head[0] == "qrep",
        "first line must be `qrep n=<n> minlen=<m>`"
    );
    let n = num(keyed(head[1], "n")?)?;
    let min_length = num(keyed(head[2], "minlen")?)?;
    let mut items = Vec::new();
    let mut tail = None;
    let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
    for (ln, t) in it {
        let res: Result<()> = (|| {
            match t.as_slice() {
                ["rank", "*", spec @ ..] => {
                    ensure!(tail.is_none(), "second `rank *` line");
                    tail = Some(parse_alphabet(spec)?);
                }
                ["rank", r, spec @ ..] => {
                    ensure!(tail.is_none(), "`rank *` must come last");
                    ensure!(
                        num(r)? == items.len(),
                        "ranks must be listed in order from 0"
                    );
                    items.push(parse_alphabet(spec)?);
                }
                ["word", e, digits @ ..] => {
                    let e = num(e)?;
                    ensure!(e < n, "word for element {e} outside 0..{n}");
                    ensure!(words[e].is_none(), "second word for element {e}");
                    words[e] = Some(digits.iter().map(|d| num(d)).collect::<Result<_>>()?);
                }
                _ => bail!("unknown line `{}`", t.join(" ")),
            }
            Ok(())
        })();
        res.with_context(|| format!("line {ln}"))?;
    }
    let words = words
        .into_iter()
        .enumerate()
        .map(|(e, w)| w.ok_or_else(|| anyhow!("no word for element {e}")))
        .collect::<Result<_>>()?;
    Ok(QuestionableRepresentation {
        alphabet: OrderSequence { items, tail },
        words,
        min_length,
    })
}

pub fn print_qrep(q: &QuestionableRepresentation) -> String {
    let mut s = format!("qrep n={} minlen={}\n", q.words.len(), q.min_length);
    for (r, o) in q.alphabet.items.iter().enumerate() {
        writeln!(s, "rank {r} {}", alphabet_text(o)).unwrap();
    }
    if let Some(t) = &q.alphabet.tail {
        writeln!(s, "rank * {}", alphabet_text(t)).unwrap();
    }
    for (e, w) in q.words.iter().enumerate() {
        write!(s, "word {e}").unwrap();
        for d in w {
            write!(s, " {d}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_graph(text: &str) -> Result<AdjacencyStructure> {
    let mut it = lines(text);
    let (_, head) = it.next().ok_or_else(|| anyhow!("empty graph file"))?;
    ensure!(
        head.len() == 2 && head[0] == "graph",
        "first line must be `graph <n>`"
    );
    let n = num(head[1])?;
    let mut edges = Vec::new();
    for (ln, t) in it {
        match t.as_slice() {
            ["edge", i, j] => edges.push((num(i)?, num(j)?)),
            _ => bail!("line {ln}: unknown line `{}`", t.join(" ")),
        }
    }
    Ok(AdjacencyStructure::from_edges(n, &edges)?)
}

pub fn print_graph(g: &AdjacencyStructure) -> Result<String> {
    let mut s = format!("graph {}\n", g.len());
    for (a, b, t) in g.pairs() {
        ensure!(t == Adj::Edge, "pair ({a}, {b}) has non-graph type {t:?}");
        writeln!(s, "edge {a} {b}").unwrap();
    }
    Ok(s)
}

/// An order or a graph, told apart by the first keyword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Order(NamedOrder),
    Graph(AdjacencyStructure),
}

impl Structure {
    pub fn adjacency(&self) -> AdjacencyStructure {
        match self {
            Structure::Order(o) => AdjacencyStructure::from_order(&o.order),
            Structure::Graph(g) => g.clone(),
        }
    }

    /// Orders when the structure reads as one, graphs otherwise.
    pub fn from_adjacency(x: &AdjacencyStructure) -> Result<Structure> {
        if let Ok(o) = x.to_order() {
            return Ok(Structure::Order(o.into()));
        }
        print_graph(x)?;
        Ok(Structure::Graph(x.clone()))
    }
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    match lines(text).next().map(|(_, t)| t[0]) {
        Some("order") => parse_order(text).map(Structure::Order),
        Some("graph") => parse_graph(text).map(Structure::Graph),
        _ => bail!("expected an `order` or `graph` file"),
    }
}

pub fn print_structure(s: &Structure) -> String {
    match s {
        Structure::Order(o) => print_order(o),
        Structure::Graph(g) => print_graph(g).expect("graph types only"),
    }
}

fn type_text(t: Adj) -> &'static str {
    match t {
        Adj::None => "NONE",
        Adj::Edge => "EDGE",
        Adj::Lt => "LT",
        Adj::Gt => "GT",
    }
}

fn parse_type(tok: &str) -> Result<Adj> {
    match tok.to_ascii_uppercase().as_str() {
        "NONE" => Ok(Adj::None),
        "EDGE" => Ok(Adj::Edge),
        "LT" => Ok(Adj::Lt),
        "GT" => Ok(Adj::Gt),
        _ => bail!("unknown adjacency type `{tok}`"),
    }
}

pub fn print_tqd(d: &Tqd) -> String {
    let mut s = String::new();
    for (id, node) in d.nodes.iter().enumerate() {
        match node {
            TqdNode::Leaf { parent, element } => {
                writeln!(
                    s,
                    "leaf {id} parent={} elem={element}",
                    parent_text(*parent)
                )
                .unwrap();
            }
            TqdNode::Inner { parent, run } => {
                writeln!(
                    s,
                    "node {id} parent={} run={}",
                    parent_text(*parent),
                    run.len()
                )
                .unwrap();
                for (step, m) in run.iter().enumerate() {
                    write!(s, "map {id} {step}").unwrap();
                    for (e, v) in &m.image {
                        write!(s, " {e}:{v}").unwrap();
                    }
                    write!(s, " struct{{ {} ;", m.target.len()).unwrap();
                    for (a, b, t) in m.target.pairs() {
                        write!(s, " type {a} {b} {}", type_text(t)).unwrap();
                    }
                    s.push_str(" }\n");
                }
            }
        }
    }
    s
}

pub fn parse_tqd(text: &str) -> Result<Tqd> {
    let mut nodes: Vec<TqdNode> = Vec::new();
    let mut declared: Vec<usize> = Vec::new();
    for (ln, t) in lines(text) {
        let res: Result<()> = (|| {
            match t.as_slice() {
                ["node", id, parent, run] => {
                    ensure!(num(id)? == nodes.len(), "node ids must run 0, 1, 2, ...");
                    nodes.push(TqdNode::Inner {
                        parent: parent_field(parent)?,
                        run: Vec::new(),
                    });
                    declared.push(num(keyed(run, "run")?)?);
                }
                ["leaf", id, parent, elem] => {
                    ensure!(num(id)? == nodes.len(), "node ids must run 0, 1, 2, ...");
                    nodes.push(TqdNode::Leaf {
                        parent: parent_field(parent)?,
                        element: num(keyed(elem, "elem")?)?,
                    });
                    declared.push(0);
                }
                ["map", id, step, rest @ ..] => {
                    let id = num(id)?;
                    let at = rest
                        .iter()
                        .position(|&x| x == "struct{")
                        .ok_or_else(|| anyhow!("missing `struct{{`"))?;
                    let mut image = BTreeMap::new();
                    for pair in &rest[..at] {
                        let (e, v) = pair
                            .split_once(':')
                            .ok_or_else(|| anyhow!("expected `elem:digit`, found `{pair}`"))?;
                        ensure!(
                            image.insert(num(e)?, num(v)?).is_none(),
                            "element {e} mapped twice"
                        );
                    }
                    let target = match &rest[at + 1..] {
                        [k, ";", types @ .., "}"] => {
                            let mut x = AdjacencyStructure::new(num(k)?);
                            ensure!(types.len() % 4 == 0, "types come as `type i j T`");
                            for c in types.chunks(4) {
                                ensure!(c[0] == "type", "expected `type`, found `{}`", c[0]);
                                let (i, j) = (num(c[1])?, num(c[2])?);
                                ensure!(
                                    i != j && i.max(j) < x.len(),
                                    "type between {i} and {j} outside the structure"
                                );
                                x.set(i, j, parse_type(c[3])?);
                            }
                            x
                        }
                        _ => bail!("malformed `struct{{ ... }}`"),
                    };
                    match nodes.get_mut(id) {
                        Some(TqdNode::Inner { run, .. }) => {
                            ensure!(
                                num(step)? == run.len(),
                                "mapping steps must run 0, 1, 2, ..."
                            );
                            run.push(Mapping { image, target });
                        }
                        _ => bail!("map line for unknown inner node {id}"),
                    }
                }
                _ => bail!("unknown line `{}`", t.join(" ")),
            }
            Ok(())
        })();
        res.with_context(|| format!("line {ln}"))?;
    }
    for (id, node) in nodes.iter().enumerate() {
        ensure!(
            node.run().len() == declared[id],
            "node {id} declares run={} but has {} mappings",
            declared[id],
            node.run().len()
        );
    }
    Ok(Tqd { nodes })
}

pub fn print_term(t: &CliqueTerm) -> String {
    fn go(t: &CliqueTerm, depth: usize, s: &mut String) {
        let pad = "  ".repeat(depth);
        match t {
            CliqueTerm::Make(l) => write!(s, "{pad}(make {l})").unwrap(),
            CliqueTerm::Union(a, b) => {
                writeln!(s, "{pad}(union").unwrap();
                go(a, depth + 1, s);
                s.push('\n');
                go(b, depth + 1, s);
                s.push(')');
            }
            CliqueTerm::Add(a, b, ty, c) => {
                writeln!(
                    s,
                    "{pad}(add {a} {b} {}",
                    type_text(*ty).to_ascii_lowercase()
                )
                .unwrap();
                go(c, depth + 1, s);
                s.push(')');
            }
            CliqueTerm::Relabel(a, b, c) => {
                writeln!(s, "{pad}(relabel {a} {b}").unwrap();
                go(c, depth + 1, s);
                s.push(')');
            }
        }
    }
    let mut s = String::new();
    go(t, 0, &mut s);
    s.push('\n');
    s
}

pub fn parse_term(text: &str) -> Result<CliqueTerm> {
    let mut toks: Vec<String> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap();
        toks.extend(
            line.replace('(', " ( ")
                .replace(')', " ) ")
                .split_whitespace()
                .map(String::from),
        );
    }
    let mut pos = 0;
    let t = term_at(&toks, &mut pos)?;
    ensure!(pos == toks.len(), "trailing input after the term");
    Ok(t)
}

fn term_at(toks: &[String], pos: &mut usize) -> Result<CliqueTerm> {
    let mut next = || -> Result<&str> {
        let t = toks
            .get(*pos)
            .ok_or_else(|| anyhow!("unexpected end of term"))?;
        *pos += 1;
        Ok(t.as_str())
    };
    ensure!(next()? == "(", "expected `(`");
    let op = next()?.to_string();
    let t = match op.as_str() {
        "make" => CliqueTerm::Make(num(next()?)?),
        "union" => {
            let a = term_at(toks, pos)?;
            let b = term_at(toks, pos)?;
            CliqueTerm::union(a, b)
        }
        "add" => {
            let a = num(next()?)?;
            let b = num(next()?)?;
            let ty = parse_type(next()?)?;
            CliqueTerm::add(a, b, ty, term_at(toks, pos)?)
        }
        "relabel" => {
            let a = num(next()?)?;
            let b = num(next()?)?;
            CliqueTerm::relabel(a, b, term_at(toks, pos)?)
        }
        _ => bail!("unknown operator `{op}`"),
    };
    let close = toks.get(*pos).map(String::as_str);
    ensure!(close == Some(")"), "expected `)` after `{op}`");
    *pos += 1;
    Ok(t)
}

pub fn print_treedec(td: &TreeDecomposition) -> String {
    let mut s = format!("treedec {}\n", td.bags.len());
    for (id, bag) in td.bags.iter().enumerate() {
        write!(s, "bag {id} parent={}", parent_text(td.parent[id])).unwrap();
        for e in bag {
            write!(s, " {e}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_treedec(text: &str) -> Result<TreeDecomposition> {
    let mut it = lines(text);
    let (_, head) = it
        .next()
        .ok_or_else(|| anyhow!("empty tree decomposition file"))?;
    ensure!(
        head.len() == 2 && head[0] == "treedec",
        "first line must be `treedec <m>`"
    );
    let m = num(head[1])?;
    let mut td = TreeDecomposition {
        parent: Vec::new(),
        bags: Vec::new(),
    };
    for (ln, t) in it {
        let res: Result<()> = (|| {
            match t.as_slice() {
                ["bag", id, parent, elems @ ..] => {
                    ensure!(num(id)? == td.bags.len(), "bag ids must run 0, 1, 2, ...");
                    td.parent.push(parent_field(parent)?);
                    td.bags
                        .push(elems.iter().map(|e| num(e)).collect::<Result<_>>()?);
                }
                _ => bail!("unknown line `{}`", t.join(" ")),
            }
            Ok(())
        })();
        res.with_context(|| format!("line {ln}"))?;
    }
    ensure!(
        td.bags.len() == m,
        "header announces {m} bags, found {}",
        td.bags.len()
    );
    Ok(td)
}
