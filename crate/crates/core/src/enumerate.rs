//! All lattices with few elements, up to isomorphism.

use std::collections::HashMap;

use crate::lattice::{lattice_iso, FiniteLattice};
use crate::order::Poset;

/// One representative of every isomorphism class of lattices with exactly
/// `n` elements.
///
/// Elements are added bottom-up: element `k` picks an antichain of earlier
/// elements as its lower covers, so every labelling is a linear extension.
/// Candidates are then kept if they are lattices not isomorphic to one
/// already found.
pub fn lattices_of_size(n: usize) -> Vec<FiniteLattice> {
    match n {
        0 => return Vec::new(),
        1 => return vec![FiniteLattice::chain(1)],
        _ => {}
    }
    let mut found: Vec<FiniteLattice> = Vec::new();
    let mut buckets: HashMap<Vec<(usize, usize)>, Vec<usize>> = HashMap::new();
    let mut down: Vec<u64> = vec![1];
    extend(n, &mut down, &mut |down| {
        let Some(l) = to_lattice(down) else { return };
        let key = signature(l.poset());
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&k| lattice_iso(&found[k], &l).is_some()) {
            return;
        }
        bucket.push(found.len());
        found.push(l);
    });
    found
}

/// Every lattice with at most `n` elements, smallest first.
pub fn lattices_up_to(n: usize) -> Vec<FiniteLattice> {
    (1..=n).flat_map(lattices_of_size).collect()
}

fn extend(n: usize, down: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    let k = down.len();
    if k == n - 1 {
        down.push((1u64 << n) - 1);
        emit(down);
        down.pop();
        return;
    }
    // lower covers: a nonempty antichain of 1..k, or the bottom alone
    let m = k - 1;
    for mask in 0u64..(1 << m) {
        let sel: Vec<usize> = (0..m)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| j + 1)
            .collect();
        if sel
            .iter()
            .any(|&a| sel.iter().any(|&b| a != b && down[b] >> a & 1 == 1))
        {
            continue;
        }
        let mut d = 1u64 | 1 << k;
        for &a in &sel {
            d |= down[a];
        }
        down.push(d);
        extend(n, down, emit);
        down.pop();
    }
}

fn to_lattice(down: &[u64]) -> Option<FiniteLattice> {
    let n = down.len();
    let names = (0..n).map(|x| format!("e{x}")).collect();
    let poset = Poset::from_relation(names, |a, b| down[b] >> a & 1 == 1).ok()?;
    FiniteLattice::from_poset(poset).ok()
}

fn signature(p: &Poset) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..p.len())
        .map(|x| (p.down(x).count_ones(..), p.up(x).count_ones(..)))
        .collect();
    v.sort_unstable();
    v
}
