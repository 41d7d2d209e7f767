//! Finite partially ordered sets.
//!
//! Elements carry opaque string names; everything internal is positional.
//! A [`Poset`] stores, for every element, the bit sets of the elements below
//! and above it, so `leq` is a single bit lookup.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite order on named elements.
#[derive(Clone)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.down == other.down
    }
}

impl Eq for Poset {}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateElement(name.clone()));
        }
    }
    Ok(index)
}

impl Poset {
    /// Builds the reflexive-transitive closure of a cover (Hasse) list.
    ///
    /// Covers are `(lower, upper)` pairs. Redundant pairs (already implied by
    /// transitivity) are accepted.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = index_names(&names)?;
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_owned()))
        };
        let mut edges = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            edges.push((lookup(a)?, lookup(b)?));
        }
        Self::from_edges(names, index, &edges)
    }

    /// Same as [`Poset::from_covers`] but with positional edges.
    pub fn from_index_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Poset> {
        let index = index_names(&names)?;
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= names.len() {
                    return Err(Error::UnknownElement(format!("#{x}")));
                }
            }
        }
        Self::from_edges(names, index, covers)
    }

    fn from_edges(
        names: Vec<String>,
        index: HashMap<String, usize>,
        edges: &[(usize, usize)],
    ) -> Result<Poset> {
        let n = names.len();
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::CycleDetected(names[a].clone(), names[b].clone()));
            }
            lower[b].push(a);
            upper[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm; whatever is left over sits on a cycle.
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).rev().collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &y in upper[x].iter().rev() {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap();
            let partner = lower[stuck]
                .iter()
                .copied()
                .find(|&y| indeg[y] > 0)
                .unwrap_or(stuck);
            return Err(Error::CycleDetected(
                names[partner].clone(),
                names[stuck].clone(),
            ));
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for &x in &order {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &l in &lower[x] {
                set.union_with(&down[l]);
            }
            down[x] = set;
        }
        let up = transpose(&down);
        Ok(Poset {
            names,
            index,
            down,
            up,
        })
    }

    /// Builds a poset from a relation given as a predicate `leq(x, y)`,
    /// checking reflexivity, antisymmetry and transitivity.
    pub fn from_relation(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let index = index_names(&names)?;
        let n = names.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (y, d) in down.iter_mut().enumerate() {
            d.extend((0..n).filter(|&x| leq(x, y)));
        }
        for x in 0..n {
            if !down[x].contains(x) {
                return Err(Error::InvalidInput(format!(
                    "relation is not reflexive at `{}`",
                    names[x]
                )));
            }
            for y in down[x].ones() {
                if y != x && down[y].contains(x) {
                    return Err(Error::CycleDetected(names[x].clone(), names[y].clone()));
                }
                if !down[y].is_subset(&down[x]) {
                    return Err(Error::InvalidInput(format!(
                        "relation is not transitive below `{}`",
                        names[x]
                    )));
                }
            }
        }
        let up = transpose(&down);
        Ok(Poset {
            names,
            index,
            down,
            up,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Looks up a name, failing with [`Error::UnknownElement`].
    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownElement(name.to_owned()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{y : y <= x}`
    pub fn down(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `{y : x <= y}`
    pub fn up(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Hasse edges `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.len() {
            for x in self.down[y].ones() {
                if x == y {
                    continue;
                }
                let mut between = self.up[x].clone();
                between.intersect_with(&self.down[y]);
                if between.count_ones(..) == 2 {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A linear extension: elements sorted by the size of their down set.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        order
    }

    /// Number of covers on a longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for x in self.linear_extension() {
            h[x] = self.down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Number of covers on a longest chain starting at each element.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for x in self.linear_extension().into_iter().rev() {
            d[x] = self.up[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| d[y] + 1)
                .max()
                .unwrap_or(0);
        }
        d
    }

    /// The order induced on a subset, keeping the given element order.
    pub fn restrict(&self, subset: &[usize]) -> Poset {
        let names: Vec<String> = subset.iter().map(|&x| self.names[x].clone()).collect();
        Poset::from_relation(names, |a, b| self.leq(subset[a], subset[b]))
            .expect("restriction of an order is an order")
    }

    /// Same order with the elements renamed.
    pub fn rename(&self, names: Vec<String>) -> Result<Poset> {
        assert_eq!(names.len(), self.len());
        let index = index_names(&names)?;
        Ok(Poset {
            names,
            index,
            down: self.down.clone(),
            up: self.up.clone(),
        })
    }

    /// Names of the elements of a bit set, in positional order.
    pub fn names_of(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|x| self.names[x].clone()).collect()
    }

    pub fn is_down_set(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.down[x].is_subset(set))
    }

    /// All down sets, smallest first (ties broken by positional content).
    ///
    /// Enumerated by backtracking along a linear extension: an element may be
    /// added only once everything below it is in.
    pub fn down_sets(&self, nonempty_only: bool) -> Vec<DownSet> {
        let order = self.linear_extension();
        let mut current = FixedBitSet::with_capacity(self.len());
        let mut out = Vec::new();
        self.down_sets_rec(&order, 0, &mut current, &mut out);
        if nonempty_only {
            out.retain(|d| !d.is_empty());
        }
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members.ones().cmp(b.members.ones()))
        });
        out
    }

    fn down_sets_rec(
        &self,
        order: &[usize],
        k: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<DownSet>,
    ) {
        if k == order.len() {
            out.push(DownSet {
                members: current.clone(),
            });
            return;
        }
        let x = order[k];
        self.down_sets_rec(order, k + 1, current, out);
        let mut below = self.down[x].clone();
        below.set(x, false);
        if below.is_subset(current) {
            current.insert(x);
            self.down_sets_rec(order, k + 1, current, out);
            current.set(x, false);
        }
    }

    /// `{x : x <= p}`
    pub fn principal_down_set(&self, p: usize) -> DownSet {
        DownSet {
            members: self.down[p].clone(),
        }
    }

    /// Same as [`Poset::principal_down_set`], by name.
    pub fn principal_down_set_of(&self, name: &str) -> Result<DownSet> {
        Ok(self.principal_down_set(self.require(name)?))
    }

    /// The unique minimum, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.up[x].count_ones(..) == self.len())
    }

    /// The unique maximum, if any.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.down[x].count_ones(..) == self.len())
    }
}

fn transpose(down: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = down.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for (y, set) in down.iter().enumerate() {
        for x in set.ones() {
            up[x].insert(y);
        }
    }
    up
}

/// A down set (order ideal) of some poset, stored as a bit set over its
/// positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DownSet {
    members: FixedBitSet,
}

impl DownSet {
    /// Wraps a bit set, checking that it is closed downward in `poset`.
    pub fn new(poset: &Poset, members: FixedBitSet) -> Result<DownSet> {
        for x in members.ones() {
            if let Some(y) = poset.down(x).ones().find(|&y| !members.contains(y)) {
                return Err(Error::NotADownSet(poset.name(y).to_owned()));
            }
        }
        Ok(DownSet { members })
    }

    /// Down set from element names.
    pub fn from_names<S: AsRef<str>>(poset: &Poset, names: &[S]) -> Result<DownSet> {
        let mut members = FixedBitSet::with_capacity(poset.len());
        for s in names {
            members.insert(poset.require(s.as_ref())?);
        }
        DownSet::new(poset, members)
    }

    pub fn empty(n: usize) -> DownSet {
        DownSet {
            members: FixedBitSet::with_capacity(n),
        }
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn names(&self, poset: &Poset) -> Vec<String> {
        poset.names_of(&self.members)
    }
}

/// The bounds of a bounded order together with its interior `P⁻` and the
/// isolated interior elements `P^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedPoset {
    poset: Poset,
    zero: usize,
    one: usize,
    interior: Vec<usize>,
    isolated: Vec<usize>,
}

impl BoundedPoset {
    pub fn new(poset: Poset) -> Result<BoundedPoset> {
        let zero = poset.minimum().ok_or(Error::NoZero)?;
        let one = poset.maximum().ok_or(Error::NoOne)?;
        let interior: Vec<usize> = (0..poset.len())
            .filter(|&x| x != zero && x != one)
            .collect();
        let isolated = interior
            .iter()
            .copied()
            .filter(|&x| interior.iter().all(|&y| y == x || !poset.comparable(x, y)))
            .collect();
        Ok(BoundedPoset {
            poset,
            zero,
            one,
            interior,
            isolated,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// `P⁻`: everything except the bounds, in positional order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// `P^d`: interior elements comparable to no other interior element.
    pub fn isolated(&self) -> &[usize] {
        &self.isolated
    }

    pub fn is_isolated(&self, x: usize) -> bool {
        self.isolated.contains(&x)
    }

    /// Strict comparabilities `p < q` inside `P⁻`, sorted.
    pub fn interior_comparabilities(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &p in &self.interior {
            for &q in &self.interior {
                if self.poset.lt(p, q) {
                    out.push((p, q));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Down sets of `P⁻`, as bit sets over positions of `P`.
    pub fn interior_down_sets(&self) -> Vec<DownSet> {
        let sub = self.poset.restrict(&self.interior);
        sub.down_sets(false)
            .into_iter()
            .map(|d| {
                let mut members = FixedBitSet::with_capacity(self.len());
                for x in d.iter() {
                    members.insert(self.interior[x]);
                }
                DownSet { members }
            })
            .collect()
    }
}

/// An order isomorphism `P -> Q` as a position map, or `None`.
///
/// Backtracking over a linear extension of `P`, pruned by per-element
/// invariants (down/up set sizes, height, depth).
pub fn order_iso(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() {
        return None;
    }
    let sig = |o: &Poset| -> Vec<(usize, usize, usize, usize)> {
        let h = o.heights();
        let d = o.depths();
        (0..o.len())
            .map(|x| (o.down(x).count_ones(..), o.up(x).count_ones(..), h[x], d[x]))
            .collect()
    };
    let sp = sig(p);
    let sq = sig(q);
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let order = p.linear_extension();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if iso_rec(p, q, &sp, &sq, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_rec(
    p: &Poset,
    q: &Poset,
    sp: &[(usize, usize, usize, usize)],
    sq: &[(usize, usize, usize, usize)],
    order: &[usize],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let x = order[k];
    for y in 0..q.len() {
        if used[y] || sp[x] != sq[y] {
            continue;
        }
        let consistent = order[..k].iter().all(|&w| {
            let v = map[w];
            p.leq(w, x) == q.leq(v, y) && p.leq(x, w) == q.leq(y, v)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if iso_rec(p, q, sp, sq, order, k + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
