use crate::error::{Error, Result};
use crate::order::FiniteOrder;
use crate::recognize::is_up_regular;

pub const ISO_BRUTE_CAP: usize = 8;

pub fn iso_trunk(a: &[usize], b: &[usize]) -> bool {
    a == b
}

/// Per level, the sorted labels of its elements. An element's label is the
/// first higher level it lies entirely below, or the height if none.
pub fn up_regular_signature(o: &FiniteOrder) -> Result<Vec<Vec<usize>>> {
    if !is_up_regular(o) {
        return Err(Error::NotUpRegular);
    }
    let lv = o.levels();
    let mut sig = vec![Vec::new(); lv.height];
    for x in 0..o.len() {
        let label = (lv.level[x] + 1..lv.height)
            .find(|&l| lv.members(l).iter().all(|&y| o.lt(x, y)))
            .unwrap_or(lv.height);
        sig[lv.level[x]].push(label);
    }
    for s in &mut sig {
        s.sort_unstable();
    }
    Ok(sig)
}

pub fn iso_up_regular(a: &FiniteOrder, b: &FiniteOrder) -> Result<bool> {
    Ok(up_regular_signature(a)? == up_regular_signature(b)?)
}

pub fn iso_bruteforce(a: &FiniteOrder, b: &FiniteOrder) -> Result<bool> {
    iso_bruteforce_capped(a, b, ISO_BRUTE_CAP)
}

pub fn iso_bruteforce_capped(a: &FiniteOrder, b: &FiniteOrder, cap: usize) -> Result<bool> {
    let n = a.len();
    if n.max(b.len()) > cap {
        return Err(Error::Size {
            n: n.max(b.len()),
            cap,
        });
    }
    if n != b.len() {
        return Ok(false);
    }
    let key = |o: &FiniteOrder| -> Vec<(usize, usize, usize)> {
        let lv = o.levels();
        (0..o.len())
            .map(|x| (lv.level[x], o.down(x).len(), o.up(x).len()))
            .collect()
    };
    let (ka, kb) = (key(a), key(b));
    let mut sa = ka.clone();
    let mut sb = kb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(false);
    }
    fn go(
        a: &FiniteOrder,
        b: &FiniteOrder,
        ka: &[(usize, usize, usize)],
        kb: &[(usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let x = map.len();
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || ka[x] != kb[y] {
                continue;
            }
            if (0..x).all(|w| a.cmp(w, x) == b.cmp(map[w], y)) {
                used[y] = true;
                map.push(y);
                if go(a, b, ka, kb, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
        }
        false
    }
    Ok(go(a, b, &ka, &kb, &mut Vec::new(), &mut vec![false; n]))
}
