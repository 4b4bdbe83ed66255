//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails. Sample sizes, seeds and time limits are fixed here.

use num_bigint::BigUint;
use qorder::build::*;
use qorder::count::*;
use qorder::generate::*;
use qorder::iso::*;
use qorder::recognize::*;
use qorder::tqd::*;
use qorder::word::*;
use qorder::FiniteOrder;
use qorder_cli::format::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn fail_if(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Err(msg())
    } else {
        Ok(())
    }
}

/// Counts linear extensions by walking every one of them.
fn enumerate_extensions(o: &FiniteOrder) -> u64 {
    fn go(o: &FiniteOrder, placed: &mut Vec<bool>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for x in 0..o.len() {
            if !placed[x] && o.down(x).iter().all(|&y| placed[y]) {
                placed[x] = true;
                total += go(o, placed, left - 1);
                placed[x] = false;
            }
        }
        total
    }
    go(o, &mut vec![false; o.len()], o.len())
}

fn interleavings(p: usize, q: usize) -> u64 {
    (0u32..1 << (p + q))
        .filter(|m| m.count_ones() as usize == q)
        .count() as u64
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn disjoint_union(parts: &[FiniteOrder]) -> FiniteOrder {
    let mut rels = Vec::new();
    let mut at = 0;
    for p in parts {
        rels.extend(p.lt_pairs().into_iter().map(|(a, b)| (a + at, b + at)));
        at += p.len();
    }
    FiniteOrder::from_relations(at, &rels).unwrap()
}

/// Lengths of all maximal chains, following cover pairs from minimal elements.
fn maximal_chain_lengths(o: &FiniteOrder) -> Vec<usize> {
    let covers = o.cover_pairs();
    let mut out = Vec::new();
    fn go(x: usize, len: usize, covers: &[(usize, usize)], out: &mut Vec<usize>) {
        let ups: Vec<usize> = covers.iter().filter(|c| c.0 == x).map(|c| c.1).collect();
        if ups.is_empty() {
            out.push(len);
        }
        for y in ups {
            go(y, len + 1, covers, out);
        }
    }
    for x in (0..o.len()).filter(|&x| o.down(x).is_empty()) {
        go(x, 1, &covers, &mut out);
    }
    out
}

fn ceil_log(base: f64, x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        ((x as f64).ln() / base.ln() - 1e-9).ceil() as usize
    }
}

fn ceil_lg(x: usize) -> usize {
    ceil_log(2.0, x)
}

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    fail_if(t > limit, || {
        format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs())
    })?;
    Ok(format!("{:.2}s", t.as_secs_f64()))
}

fn recognition() -> Check {
    let start = Instant::now();
    let mut orders = Vec::new();
    for n in 1..=5 {
        orders.extend(all_posets(n).unwrap());
    }
    let exhaustive = orders.len();
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for s in 0..500 {
        let n = r.gen_range(1..=8);
        let density = r.gen_range(0.05..0.8);
        orders.push(random_order(n, density, s).unwrap());
    }
    let mut bad = 0;
    for o in &orders {
        let obs1 = find_obstruction(o, Pattern::Obs1).is_some();
        let obs2 = find_obstruction(o, Pattern::Obs2).is_some();
        let obst = find_obstruction(o, Pattern::Obst).is_some();
        bad += usize::from(is_itov_fast(o) != (!obs1 && !obs2));
        bad += usize::from(is_trunk(o) != !obst);
        bad += usize::from(sp_decompose(o).is_ok() != !obs2);
    }
    fail_if(bad > 0, || format!("{bad} disagreements"))?;
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!(
        "{exhaustive} exhaustive + 500 random orders, 0 disagreements, {t}"
    ))
}

fn builders() -> Check {
    let mut total = 0;
    for n in 1..=7 {
        for s in 0..50u64 {
            let host = FiniteOrder::chain(n).permuted(&random_permutation(n, s * 31 + n as u64));
            let ins = random_permutation(n, 7000 + s * 13 + n as u64);
            let q = build_total_strict_binary(&host, &ins)
                .map_err(|e| format!("total n={n} s={s}: {e}"))?;
            let rep = validate_qrep(&host, &q, true).unwrap();
            fail_if(!rep.ok, || format!("total n={n} s={s}: {}", rep.detail))?;
            fail_if(q.max_len() > n, || {
                format!("total n={n} s={s}: length {} > {n}", q.max_len())
            })?;
            total += 1;
        }
    }
    for s in 0..300u64 {
        let n = 1 + (s as usize % 14);
        let o = random_itov(n, s).unwrap();
        let q = build_itov_total_binary(&o).map_err(|e| format!("itov n={n} s={s}: {e}"))?;
        let rep = validate_qrep(&o, &q, false).unwrap();
        fail_if(!rep.ok, || format!("itov n={n} s={s}: {}", rep.detail))?;
        fail_if(q.max_len() > 2 * n, || {
            format!("itov n={n} s={s}: length {}", q.max_len())
        })?;
    }
    for s in 0..300u64 {
        let n = 2 + (s as usize % 13);
        let o = random_sp(n, s).unwrap();
        let q = build_width2(&o)
            .and_then(|q| strictify(&o, &q))
            .map_err(|e| format!("sp n={n} s={s}: {e}"))?;
        let rep = validate_qrep(&o, &q, true).unwrap();
        fail_if(!rep.ok, || format!("sp n={n} s={s}: {}", rep.detail))?;
        fail_if(q.width() != 2, || {
            format!("sp n={n} s={s}: width {}", q.width())
        })?;
    }
    Ok(format!(
        "{total} total, 300 itov, 300 series-parallel representations validate"
    ))
}

fn worked_examples() -> Check {
    // elements a, b, c, d are 0, 1, 2, 3
    let cases: Vec<(usize, Vec<(usize, usize)>, Vec<&str>)> = vec![
        (3, vec![(0, 1), (2, 1)], vec!["0", "1", "00"]),
        (4, vec![(0, 1), (2, 1), (3, 1)], vec!["0", "1", "00", "000"]),
        (
            4,
            vec![(0, 1), (0, 3), (2, 3), (2, 1)],
            vec!["0", "1", "00", "11"],
        ),
        (
            4,
            vec![(0, 1), (0, 2), (1, 2), (3, 1), (3, 2)],
            vec!["0", "10", "11", "00"],
        ),
        (
            4,
            vec![(0, 1), (0, 2), (1, 2), (0, 3), (3, 2)],
            vec!["0", "10", "11", "100"],
        ),
        (
            4,
            vec![(0, 1), (0, 2), (1, 2), (3, 2)],
            vec!["00", "010", "111", "0"],
        ),
    ];
    for (i, (n, rels, words)) in cases.iter().enumerate() {
        let o = FiniteOrder::from_relations(*n, rels).unwrap();
        let q = QuestionableRepresentation::new(
            OrderSequence::uniform(total2()),
            words.iter().map(|w| word(w)).collect(),
        );
        let rep = validate_qrep(&o, &q, false).unwrap();
        fail_if(!rep.ok, || format!("case {i}: {}", rep.detail))?;
        let inv = QuestionableRepresentation::new(q.alphabet.invert(), q.words.clone());
        let rep = validate_qrep(&o.invert(), &inv, false).unwrap();
        fail_if(!rep.ok, || format!("inverse of case {i}: {}", rep.detail))?;
    }
    for p in [Pattern::Obs1, Pattern::Obs2] {
        fail_if(is_itov_fast(&p.order()), || format!("{p:?} accepted"))?;
    }
    Ok("3-element and five 4-element assignments validate (with inverses); both obstructions rejected".into())
}

fn counting() -> Check {
    let start = Instant::now();
    let obs = (
        enumerate_extensions(&Pattern::Obs1.order()),
        enumerate_extensions(&Pattern::Obs2.order()),
    );
    fail_if(obs != (6, 5), || format!("obstruction counts {obs:?}"))?;
    fail_if(
        count_auto(&Pattern::Obs1.order()).unwrap() != big(6),
        || "auto count of OBS1".into(),
    )?;
    fail_if(
        count_bruteforce(&Pattern::Obs2.order()).unwrap() != big(5),
        || "brute count of OBS2".into(),
    )?;
    for s in 0..300u64 {
        let o = random_sp(1 + s as usize % 8, s).unwrap();
        let want = big(enumerate_extensions(&o));
        fail_if(count_sp(&o).unwrap() != want, || format!("sp seed {s}"))?;
        fail_if(count_bruteforce(&o).unwrap() != want, || {
            format!("brute seed {s}")
        })?;
    }
    for s in 0..100u64 {
        let o = random_cedar(1 + s as usize % 10, s).unwrap();
        let got = count_cedar(&o).map_err(|e| format!("cedar seed {s}: {e}"))?;
        fail_if(got != count_bruteforce(&o).unwrap(), || {
            format!("cedar seed {s}")
        })?;
        fail_if(got != big(enumerate_extensions(&o)), || {
            format!("cedar seed {s} vs enumeration")
        })?;
    }
    for s in 0..100u64 {
        let o = random_trunk(1 + s as usize % 8, s).unwrap();
        let got = count_trunk(&trunk_profile(&o).unwrap());
        fail_if(got != count_bruteforce(&o).unwrap(), || {
            format!("trunk seed {s}")
        })?;
    }
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for s in 0..100u64 {
        let k = r.gen_range(2..=3);
        let mut parts = Vec::new();
        let mut left: usize = 9;
        for i in 0..k {
            let size = r.gen_range(1..=(left - (k - 1 - i)).min(5));
            left -= size;
            parts.push(random_order(size, r.gen_range(0.3..1.0), s * 7 + i as u64).unwrap());
        }
        let o = disjoint_union(&parts);
        let comps = o.connected_components();
        let counted: Vec<(BigCount, usize)> = comps
            .iter()
            .map(|c| (count_bruteforce(&o.induced(c).unwrap()).unwrap(), c.len()))
            .collect();
        let got = count_disconnected(&counted);
        fail_if(got != big(enumerate_extensions(&o)), || {
            format!("components seed {s}")
        })?;
    }
    for p in 0..=20 {
        fail_if(
            fusion(p, 0) != big(1) || fusion(p, 1) != big(p as u64 + 1),
            || format!("fusion base case p={p}"),
        )?;
    }
    for p in 0..=12 {
        for q in 0..=12 - p {
            fail_if(fusion(p, q) != big(interleavings(p, q)), || {
                format!("fusion({p}, {q})")
            })?;
        }
    }
    let t = timed(Duration::from_secs(120), start)?;
    Ok(format!(
        "300 sp, 100 cedar, 100 trunk, 100 multi-component orders and fusion table agree, {t}"
    ))
}

fn isomorphism() -> Check {
    let mut pool: Vec<FiniteOrder> = Vec::new();
    for n in 1..=5 {
        pool.extend(all_posets(n).unwrap().into_iter().filter(is_up_regular));
    }
    for s in 0..400u64 {
        let n = 6 + s as usize % 3;
        let o = match s % 3 {
            0 => random_cedar(n, s).unwrap(),
            1 => random_itov(n, s).unwrap(),
            _ => random_order(n, [0.15, 0.6, 0.85][s as usize % 3], s).unwrap(),
        };
        if is_up_regular(&o) {
            pool.push(o);
        }
    }
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let (mut same, mut differ) = (0, 0);
    for i in 0..200 {
        let a = &pool[r.gen_range(0..pool.len())];
        let b = if i % 2 == 0 {
            a.clone()
        } else {
            let profile = |o: &FiniteOrder| {
                let mut s = o.levels().sizes();
                s.push(o.lt_pairs().len());
                s
            };
            let near: Vec<&FiniteOrder> = pool
                .iter()
                .filter(|o| o.len() == a.len() && profile(o) == profile(a) && *o != a)
                .collect();
            if near.is_empty() {
                pool.iter()
                    .filter(|o| o.len() == a.len())
                    .nth(r.gen_range(0..2))
                    .unwrap_or(a)
                    .clone()
            } else {
                near[r.gen_range(0..near.len())].clone()
            }
        };
        let b = b.permuted(&random_permutation(b.len(), 900 + i));
        let fast = iso_up_regular(a, &b).unwrap();
        let slow = iso_bruteforce(a, &b).unwrap();
        fail_if(fast != slow, || {
            format!("pair {i}: signature says {fast}, search says {slow}")
        })?;
        if slow {
            same += 1
        } else {
            differ += 1
        }
    }
    for s in 0..100u64 {
        let n = 1 + s as usize % 8;
        let a = random_trunk(n, s).unwrap();
        let b = if s % 2 == 0 {
            a.permuted(&random_permutation(n, s + 50))
        } else {
            random_trunk(n, s + 1000).unwrap()
        };
        let fast = iso_trunk(&trunk_profile(&a).unwrap(), &trunk_profile(&b).unwrap());
        fail_if(fast != iso_bruteforce(&a, &b).unwrap(), || {
            format!("trunk pair {s}")
        })?;
    }
    Ok(format!(
        "200 up-regular pairs ({same} isomorphic, {differ} not) and 100 trunk pairs agree"
    ))
}

fn full_closure(o: &FiniteOrder) -> bool {
    let n = o.len();
    (0..n).all(|x| (x + 1..n).all(|y| forced_equal_closure(o, (x, y)).len() == n))
}

fn gadgets() -> Check {
    for m in 1..=6 {
        fail_if(!full_closure(&zigzag(m).unwrap()), || {
            format!("zigzag({m}) closure")
        })?;
    }
    fail_if(
        !iso_bruteforce(&zigzag(2).unwrap(), &Pattern::Obs2.order()).unwrap(),
        || "zigzag(2) vs OBS2".into(),
    )?;
    for k in 4..=12 {
        let tw = trunk_with_woodpeckers(k).unwrap();
        fail_if(tw.len() != (k * k - k) / 2 + 1, || {
            format!("TW_{k} has {} elements", tw.len())
        })?;
        if k <= 7 {
            fail_if(find_obstruction(&tw, Pattern::Obs1).is_some(), || {
                format!("TW_{k} contains OBS1")
            })?;
        }
        if k == 6 || k == 7 {
            fail_if(is_up_regular(&tw), || format!("TW_{k} is up-regular"))?;
        }
    }
    for i in 2..=5 {
        fail_if(!full_closure(&groups_order(i).unwrap()), || {
            format!("groups_order({i}) closure")
        })?;
    }
    Ok("zigzag m<=6 and groups i<=5 closures full; zigzag(2) ~ OBS2; TW_k counts, OBS1-free, not up-regular".into())
}

fn structure() -> Check {
    let mut up = Vec::new();
    let mut s = 0u64;
    while up.len() < 297 {
        let n = 1 + s as usize % 12;
        let o = match s % 3 {
            0 => random_itov(n, s).unwrap(),
            1 => random_cedar(n, s).unwrap(),
            _ => random_order(n, 0.2 + 0.3 * (s % 3) as f64, s).unwrap(),
        };
        if is_up_regular(&o) {
            up.push(o);
        }
        s += 1;
    }
    up.extend((0..3).map(pmrh));
    for (i, o) in up.iter().enumerate() {
        let t = rmf_trunk(o).ok_or_else(|| format!("up-regular order {i} has no trunk"))?;
        let rest: Vec<usize> = (0..o.len()).filter(|x| !t.contains(x)).collect();
        let hr = o.induced(&rest).unwrap().height();
        let h = o.height();
        fail_if(hr > h.div_ceil(2), || {
            format!("order {i}: rest height {hr}, height {h}")
        })?;
        let lens = maximal_chain_lengths(&o.induced(&t).unwrap());
        fail_if(lens.iter().any(|&l| l != lens[0]), || {
            format!("order {i}: trunk chains {lens:?}")
        })?;
    }
    for s in 0..300u64 {
        let o = random_itov(1 + s as usize % 14, s).unwrap();
        let d = decompose_itov(&o).map_err(|e| format!("itov seed {s}: {e}"))?;
        fail_if(!is_trunk(&o.induced(&d.trunk).unwrap()), || {
            format!("seed {s}: trunk part")
        })?;
        for &x in &d.rest {
            fail_if(!is_regular_to_trunk(&o, x, &d.trunk).unwrap(), || {
                format!("seed {s}: element {x} irregular")
            })?;
        }
        fail_if(!is_itov_fast(&d.rest_order), || {
            format!("seed {s}: rest not itov")
        })?;
        let lens = maximal_chain_lengths(&o.induced(&d.trunk).unwrap());
        fail_if(lens.iter().any(|&l| l != lens[0]), || {
            format!("seed {s}: trunk chains {lens:?}")
        })?;
    }
    Ok("300 up-regular orders halve, 300 itov decompositions hold, trunk chains equal".into())
}

fn elimination_td(x: &AdjacencyStructure, seed: u64) -> TreeDecomposition {
    tree_decomposition_from_elimination(x, &random_permutation(x.len(), seed)).unwrap()
}

fn conversions() -> Check {
    let start = Instant::now();
    for s in 0..200u64 {
        let n = 2 + s as usize % 9;
        let o = random_sp(n, s).unwrap();
        let q = strictify(&o, &build_width2(&o).unwrap()).unwrap();
        let (t, leaves) = qrep_to_clique(&o, &q).map_err(|e| format!("seed {s}: {e}"))?;
        let back = t
            .eval()
            .unwrap()
            .0
            .to_order()
            .map_err(|e| format!("seed {s}: {e}"))?;
        fail_if(back != o.induced(&leaves).unwrap(), || {
            format!("seed {s}: round trip")
        })?;
        fail_if(t.labels().iter().any(|&l| l > 2), || {
            format!("seed {s}: labels {:?}", t.labels())
        })?;
        let bound = clique_depth_bound(n, 2, q.max_len());
        fail_if(t.depth() > bound, || {
            format!("seed {s}: depth {} > {bound}", t.depth())
        })?;
    }
    for p in 1..=6 {
        for q in 1..=6 {
            let d = tqd_grid(p, q).unwrap();
            let rep = tqd_validate(&grid(p, q).unwrap(), &d, true).unwrap();
            fail_if(!rep.ok, || format!("grid {p}x{q}: {}", rep.detail))?;
            fail_if(!d.is_bijective() || d.width() > 3, || {
                format!("grid {p}x{q}: width {}", d.width())
            })?;
            let (alpha, beta) = d.depths();
            // a lone vertex is a one-node tree; the formula gives 0 there
            let bound = (ceil_log(5.0 / 3.0, p) + ceil_log(1.5, q)).max(1);
            fail_if(alpha > bound, || {
                format!("grid {p}x{q}: structural depth {alpha} > {bound}")
            })?;
            let lbound = 2 * ceil_log(5.0 / 3.0, p) + (ceil_lg(p) + 1) * ceil_log(1.5, q);
            fail_if(beta > lbound, || {
                format!("grid {p}x{q}: logical depth {beta} > {lbound}")
            })?;
        }
    }
    let mut tds: Vec<(AdjacencyStructure, TreeDecomposition)> = Vec::new();
    for n in 2..=6 {
        let path =
            AdjacencyStructure::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
                .unwrap();
        let td = TreeDecomposition {
            parent: (0..n - 1).map(|i| i.checked_sub(1)).collect(),
            bags: (1..n).map(|i| vec![i - 1, i]).collect(),
        };
        tds.push((path, td));
    }
    let tri = AdjacencyStructure::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    tds.push((
        tri,
        TreeDecomposition {
            parent: vec![None],
            bags: vec![vec![0, 1, 2]],
        },
    ));
    let g = grid(3, 3).unwrap();
    let column_major: Vec<usize> = (0..3)
        .flat_map(|c| (0..3).map(move |r| r * 3 + c))
        .collect();
    tds.push((
        g.clone(),
        tree_decomposition_from_elimination(&g, &column_major).unwrap(),
    ));
    for s in 0..13u64 {
        let x = AdjacencyStructure::from_order(&random_order(3 + s as usize % 6, 0.4, s).unwrap());
        let td = elimination_td(&x, s);
        tds.push((x, td));
    }
    for (i, (x, td)) in tds.iter().enumerate() {
        let d = tqd_from_tree_decomposition(x, td).map_err(|e| format!("td case {i}: {e}"))?;
        let rep = tqd_validate(x, &d, false).unwrap();
        fail_if(!rep.ok, || format!("td case {i}: {}", rep.detail))?;
        let (k, depth) = (td.width(), td.depth());
        let (alpha, beta) = d.depths();
        fail_if(
            d.width() > k + 2 || alpha > depth + 1 || beta > depth,
            || {
                format!(
                    "td case {i}: ({}, {alpha}, {beta}) against ({}, {}, {depth})",
                    d.width(),
                    k + 2,
                    depth + 1
                )
            },
        )?;
    }
    let mut terms = vec![
        CliqueTerm::add(
            1,
            2,
            Adj::Lt,
            CliqueTerm::union(CliqueTerm::Make(1), CliqueTerm::Make(2)),
        ),
        {
            let pair = || {
                CliqueTerm::add(
                    1,
                    2,
                    Adj::Lt,
                    CliqueTerm::union(CliqueTerm::Make(1), CliqueTerm::Make(2)),
                )
            };
            CliqueTerm::union(pair(), pair())
        },
    ];
    for s in 0..18u64 {
        let o = random_sp(3 + s as usize % 8, 500 + s).unwrap();
        let q = strictify(&o, &build_width2(&o).unwrap()).unwrap();
        terms.push(qrep_to_clique(&o, &q).unwrap().0);
    }
    for (i, t) in terms.iter().enumerate() {
        let x = t.eval().unwrap().0;
        let d = tqd_from_clique_term(&x, t).map_err(|e| format!("term {i}: {e}"))?;
        let rep = tqd_validate(&x, &d, true).unwrap();
        fail_if(!rep.ok, || format!("term {i}: {}", rep.detail))?;
        let (k, depth) = (t.labels().len(), t.depth());
        let (alpha, beta) = d.depths();
        fail_if(
            !d.is_bijective() || d.width() > 2 * k || alpha > depth || beta + 1 > depth,
            || {
                format!(
                    "term {i}: ({}, {alpha}, {beta}) against ({}, {depth}, {})",
                    d.width(),
                    2 * k,
                    depth - 1
                )
            },
        )?;
    }
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!(
        "200 clique round trips, 36 grids, {} tree and {} term conversions, {t}",
        tds.len(),
        terms.len()
    ))
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run_gen(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qorder"))
        .args(args)
        .arg("-o")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    fail_if(!status.success(), || {
        format!("gen {args:?} exited with {status}")
    })?;
    std::fs::read(out).map_err(|e| e.to_string())
}

fn reparses(path: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let err = |e: anyhow::Error| format!("{}: {e:#}", path.display());
    let same = match ext {
        "ord" => {
            let v = parse_order(&text).map_err(err)?;
            parse_order(&print_order(&v)).map_err(err)? == v
        }
        "qrep" => {
            let v = parse_qrep(&text).map_err(err)?;
            parse_qrep(&print_qrep(&v)).map_err(err)? == v
        }
        "tqd" => {
            let v = parse_tqd(&text).map_err(err)?;
            parse_tqd(&print_tqd(&v)).map_err(err)? == v
        }
        "cwt" => {
            let v = parse_term(&text).map_err(err)?;
            parse_term(&print_term(&v)).map_err(err)? == v
        }
        "adj" => {
            let v = parse_graph(&text).map_err(err)?;
            parse_graph(&print_graph(&v).map_err(err)?).map_err(err)? == v
        }
        "td" => {
            let v = parse_treedec(&text).map_err(err)?;
            parse_treedec(&print_treedec(&v)).map_err(err)? == v
        }
        _ => return Ok(()),
    };
    fail_if(!same, || {
        format!("{} does not survive print and parse", path.display())
    })
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let kinds: &[&[&str]] = &[
        &["chain", "5"],
        &["antichain", "4"],
        &["zigzag", "3"],
        &["tw", "5"],
        &["pmrh", "2"],
        &["groups", "4"],
        &["random-sp", "12"],
        &["random-itov", "12"],
        &["random-cedar", "12"],
        &["random-trunk", "12"],
        &["random", "10", "0.4"],
        &["grid", "3", "4"],
    ];
    let mut files = 0;
    for (i, k) in kinds.iter().enumerate() {
        let ext = if k[0] == "grid" { "adj" } else { "ord" };
        let mut args = vec!["gen"];
        args.extend_from_slice(k);
        args.extend(["--seed", "42"]);
        let a = dir.path().join(format!("{i}a.{ext}"));
        let b = dir.path().join(format!("{i}b.{ext}"));
        let (x, y) = (run_gen(&args, &a)?, run_gen(&args, &b)?);
        fail_if(x != y, || format!("gen {k:?} differs between runs"))?;
        reparses(&a)?;
        files += 1;
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    fail_if(entries.len() < 6, || {
        "fixture directory is incomplete".into()
    })?;
    for p in &entries {
        reparses(p)?;
    }
    Ok(format!(
        "{files} seeded generators byte-identical; {} fixtures re-parse",
        entries.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("recognition equivalence", recognition),
        ("builder round trips", builders),
        ("worked examples", worked_examples),
        ("counting oracles", counting),
        ("isomorphism", isomorphism),
        ("lower-bound gadgets", gadgets),
        ("structural lemmas", structure),
        ("decomposition conversions", conversions),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
