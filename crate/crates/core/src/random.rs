//! Seeded generators for bounded posets and small lattices.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lattice::FiniteLattice;
use crate::order::{BoundedPoset, Poset};

/// A random bounded poset with between 1 and `max_size` elements.
///
/// The interior is a random DAG: after shuffling `k` fresh elements, each
/// pair `x` before `y` becomes a cover with probability 1/2. Bounds `0` and
/// `1` are added around it; sizes 1 and 2 give the one- and two-element
/// chains.
pub fn random_bounded_poset<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> BoundedPoset {
    let n = rng.gen_range(1..=max_size.max(1));
    bounded_poset_of_size(rng, n)
}

/// As [`random_bounded_poset`] with exactly `n ≥ 1` elements.
pub fn bounded_poset_of_size<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BoundedPoset {
    let poset = match n {
        0 | 1 => Poset::from_covers::<&str>(&["0"], &[]),
        2 => Poset::from_covers(&["0", "1"], &[("0", "1")]),
        _ => {
            let k = n - 2;
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(rng);
            let mut names = vec!["0".to_owned()];
            names.extend((1..=k).map(|x| format!("x{x}")));
            names.push("1".to_owned());
            let mut covers = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    if rng.gen_bool(0.5) {
                        covers.push((order[i] + 1, order[j] + 1));
                    }
                }
            }
            for x in 1..=k {
                covers.push((0, x));
                covers.push((x, k + 1));
            }
            Poset::from_index_covers(names, &covers)
        }
    };
    BoundedPoset::new(poset.expect("generated covers are acyclic")).expect("bounds were added")
}

/// A random lattice with at most `max_size` elements: the intersection
/// closure of a few random subsets of a small ground set, plus the full set.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> FiniteLattice {
    loop {
        let ground = rng.gen_range(2..=4u32);
        let full = (1u32 << ground) - 1;
        let mut family = vec![full];
        for _ in 0..rng.gen_range(1..=5) {
            let s = rng.gen_range(0..=full);
            let mut extra = vec![s];
            for &t in &family {
                extra.push(s & t);
            }
            for e in extra {
                if !family.contains(&e) {
                    family.push(e);
                }
            }
            // intersections of the new sets with each other
            let mut changed = true;
            while changed {
                changed = false;
                for a in 0..family.len() {
                    for b in 0..family.len() {
                        let m = family[a] & family[b];
                        if !family.contains(&m) {
                            family.push(m);
                            changed = true;
                        }
                    }
                }
            }
        }
        if family.len() > max_size.max(1) {
            continue;
        }
        family.sort_by_key(|s| (s.count_ones(), *s));
        let names: Vec<String> = family.iter().map(|s| format!("s{s:b}")).collect();
        let poset = Poset::from_relation(names, |a, b| family[a] & family[b] == family[a])
            .expect("inclusion is an order");
        return FiniteLattice::from_poset(poset)
            .expect("an intersection-closed family with a top is a lattice");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_bounded_poset(&mut rng, 6);
            assert!((1..=6).contains(&p.len()));
        }
    }

    #[test]
    fn seeded_is_repeatable() {
        let a = random_bounded_poset(&mut ChaCha8Rng::seed_from_u64(3), 8);
        let b = random_bounded_poset(&mut ChaCha8Rng::seed_from_u64(3), 8);
        assert_eq!(a, b);
    }

    #[test]
    fn lattices_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let l = random_lattice(&mut rng, 10);
            assert!(l.len() <= 10);
        }
    }
}
