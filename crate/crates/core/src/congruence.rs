//! Congruences of finite lattices.
//!
//! A [`Congruence`] is stored in canonical form: every element points at the
//! least (positional) member of its block, so two congruences are equal iff
//! their vectors are equal. Closures run on a union-find with a work queue of
//! the pairs that caused merges; each queued pair is pushed through joins and
//! meets with every element until nothing new is identified.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::order::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block: Vec<u32>,
}

impl Congruence {
    /// The zero congruence (all blocks trivial).
    pub fn zero(n: usize) -> Congruence {
        Congruence {
            block: (0..n as u32).collect(),
        }
    }

    /// The one congruence (a single block).
    pub fn one(n: usize) -> Congruence {
        Congruence { block: vec![0; n] }
    }

    /// An equivalence from explicit blocks; unlisted elements are
    /// singletons and overlapping blocks are merged. No substitution check.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Congruence {
        let mut uf = UnionFind::new(n);
        for b in blocks {
            for w in b.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf.canonical()
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    /// Least member of the block of `x`.
    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.block[x] as usize
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block[x] == self.block[y]
    }

    /// Least members of all blocks, increasing.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.rep(x) == x).collect()
    }

    pub fn num_blocks(&self) -> usize {
        (0..self.len()).filter(|&x| self.rep(x) == x).count()
    }

    /// Blocks as sorted position lists, ordered by least member.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let reps = self.representatives();
        let slot: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut out = vec![Vec::new(); reps.len()];
        for x in 0..self.len() {
            out[slot[&self.rep(x)]].push(x);
        }
        out
    }

    /// Members of the block of `x`.
    pub fn block_of(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.related(x, y)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.block.iter().enumerate().all(|(x, &b)| b as usize == x)
    }

    pub fn is_one(&self) -> bool {
        self.block.iter().all(|&b| b == 0)
    }

    /// `self ≤ other` in the refinement order.
    pub fn refines(&self, other: &Congruence) -> bool {
        (0..self.len()).all(|x| other.related(x, self.rep(x)))
    }

    /// Intersection of two equivalences.
    pub fn meet(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.len());
        let mut first: HashMap<(u32, u32), usize> = HashMap::new();
        for x in 0..self.len() {
            let key = (self.block[x], other.block[x]);
            match first.get(&key) {
                Some(&y) => {
                    uf.union(x, y);
                }
                None => {
                    first.insert(key, x);
                }
            }
        }
        uf.canonical()
    }

    /// Exhaustive substitution check: `x ≡ y` implies `x∨z ≡ y∨z` and
    /// `x∧z ≡ y∧z` for every `z`.
    pub fn check(&self, lat: &FiniteLattice) -> Result<()> {
        if self.len() != lat.len() {
            return Err(Error::NotACongruence(format!(
                "partition over {} elements, lattice has {}",
                self.len(),
                lat.len()
            )));
        }
        for x in 0..self.len() {
            let r = self.rep(x);
            if r == x {
                continue;
            }
            for z in 0..lat.len() {
                if !self.related(lat.join(x, z), lat.join(r, z)) {
                    return Err(Error::NotACongruence(format!(
                        "{} ≡ {} but {} ∨ {} ≢ {} ∨ {}",
                        lat.name(x),
                        lat.name(r),
                        lat.name(x),
                        lat.name(z),
                        lat.name(r),
                        lat.name(z)
                    )));
                }
                if !self.related(lat.meet(x, z), lat.meet(r, z)) {
                    return Err(Error::NotACongruence(format!(
                        "{} ≡ {} but {} ∧ {} ≢ {} ∧ {}",
                        lat.name(x),
                        lat.name(r),
                        lat.name(x),
                        lat.name(z),
                        lat.name(r),
                        lat.name(z)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_congruence_of(&self, lat: &FiniteLattice) -> bool {
        self.check(lat).is_ok()
    }

    /// Blocks as names: each block sorted, blocks sorted by their first name.
    pub fn named_blocks(&self, lat: &FiniteLattice) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .blocks()
            .into_iter()
            .map(|b| {
                let mut names: Vec<String> = b.iter().map(|&x| lat.name(x).to_owned()).collect();
                names.sort();
                names
            })
            .collect();
        out.sort();
        out
    }

    /// Nontrivial blocks only, same ordering as [`Congruence::named_blocks`].
    pub fn nontrivial_named_blocks(&self, lat: &FiniteLattice) -> Vec<Vec<String>> {
        let mut v = self.named_blocks(lat);
        v.retain(|b| b.len() > 1);
        v
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn from_congruence(c: &Congruence) -> UnionFind {
        UnionFind {
            parent: c.block.clone(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// Returns true when two different blocks were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // the smaller index stays root, which keeps roots = least members
        if ra < rb {
            self.parent[rb] = ra as u32;
        } else {
            self.parent[ra] = rb as u32;
        }
        true
    }

    fn canonical(mut self) -> Congruence {
        let n = self.parent.len();
        let block = (0..n).map(|x| self.find(x) as u32).collect();
        Congruence { block }
    }
}

/// Fixpoint closure of an equivalence under the substitution properties.
struct Closure<'a> {
    lat: &'a FiniteLattice,
    uf: UnionFind,
    queue: Vec<(usize, usize)>,
}

impl<'a> Closure<'a> {
    fn new(lat: &'a FiniteLattice) -> Self {
        Closure {
            lat,
            uf: UnionFind::new(lat.len()),
            queue: Vec::new(),
        }
    }

    fn starting_from(lat: &'a FiniteLattice, theta: &Congruence) -> Self {
        Closure {
            lat,
            uf: UnionFind::from_congruence(theta),
            queue: Vec::new(),
        }
    }

    fn identify(&mut self, a: usize, b: usize) {
        if self.uf.union(a, b) {
            self.queue.push((a, b));
        }
    }

    fn run(mut self) -> Congruence {
        let n = self.lat.len();
        while let Some((x, y)) = self.queue.pop() {
            for z in 0..n {
                let (jx, jy) = (self.lat.join(x, z), self.lat.join(y, z));
                self.identify(jx, jy);
                let (mx, my) = (self.lat.meet(x, z), self.lat.meet(y, z));
                self.identify(mx, my);
            }
        }
        self.uf.canonical()
    }
}

/// `con(x, y)`: the smallest congruence collapsing `x` and `y`.
pub fn principal_congruence(lat: &FiniteLattice, x: usize, y: usize) -> Congruence {
    generated_congruence(lat, &[(x, y)])
}

/// The smallest congruence collapsing every listed pair.
pub fn generated_congruence(lat: &FiniteLattice, pairs: &[(usize, usize)]) -> Congruence {
    let mut c = Closure::new(lat);
    for &(x, y) in pairs {
        c.identify(x, y);
    }
    c.run()
}

/// The join of two congruences in `Con L`.
pub fn join_congruences(lat: &FiniteLattice, a: &Congruence, b: &Congruence) -> Congruence {
    let mut c = Closure::starting_from(lat, a);
    for x in 0..b.len() {
        c.identify(x, b.rep(x));
    }
    c.run()
}

/// An I-congruence: nonzero, with `{o}` and `{i}` as blocks.
pub fn is_i_congruence(lat: &FiniteLattice, theta: &Congruence) -> bool {
    let (o, i) = (lat.bottom(), lat.top());
    !theta.is_zero()
        && (0..lat.len())
            .all(|x| (x == o || !theta.related(x, o)) && (x == i || !theta.related(x, i)))
}

/// `Con L` with its refinement order.
#[derive(Clone, Debug)]
pub struct ConOrder {
    congruences: Vec<Congruence>,
    position: HashMap<Congruence, usize>,
    leq: Vec<FixedBitSet>,
}

impl ConOrder {
    fn new(mut congruences: Vec<Congruence>) -> ConOrder {
        // finest first; ties by canonical vector
        congruences.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
        congruences.dedup();
        let m = congruences.len();
        let position = congruences
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let mut leq = vec![FixedBitSet::with_capacity(m); m];
        for (a, ca) in congruences.iter().enumerate() {
            for (b, cb) in congruences.iter().enumerate() {
                if ca.refines(cb) {
                    leq[a].insert(b);
                }
            }
        }
        ConOrder {
            congruences,
            position,
            leq,
        }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn get(&self, i: usize) -> &Congruence {
        &self.congruences[i]
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.position.get(c).copied()
    }

    pub fn contains(&self, c: &Congruence) -> bool {
        self.position.contains_key(c)
    }

    /// Refinement: `congruences[a] ≤ congruences[b]`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    /// The refinement order as a [`Poset`], elements named `θ0, θ1, …`.
    pub fn to_poset(&self) -> Poset {
        let names = (0..self.len()).map(|i| format!("θ{i}")).collect();
        Poset::from_relation(names, |a, b| self.leq(a, b)).expect("refinement is an order")
    }
}

/// All congruences of `lat`, as the join-closure of the principal
/// congruences of prime intervals (every congruence of a finite lattice is
/// a join of those).
pub fn all_congruences(lat: &FiniteLattice) -> ConOrder {
    let n = lat.len();
    let mut gens: Vec<Congruence> = lat
        .prime_intervals()
        .into_iter()
        .map(|e| principal_congruence(lat, e.lower, e.upper))
        .collect();
    gens.sort();
    gens.dedup();
    let zero = Congruence::zero(n);
    let mut seen: HashMap<Congruence, ()> = HashMap::new();
    seen.insert(zero.clone(), ());
    let mut found = vec![zero];
    let mut frontier: Vec<Congruence> = Vec::new();
    for g in &gens {
        if seen.insert(g.clone(), ()).is_none() {
            found.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while let Some(theta) = frontier.pop() {
        for g in &gens {
            if g.refines(&theta) {
                continue;
            }
            let j = join_congruences(lat, &theta, g);
            if seen.insert(j.clone(), ()).is_none() {
                found.push(j.clone());
                frontier.push(j);
            }
        }
    }
    ConOrder::new(found)
}

/// `Princ L` with one generating pair per member.
#[derive(Clone, Debug)]
pub struct PrincOrder {
    congruences: Vec<Congruence>,
    witnesses: Vec<(usize, usize)>,
}

impl PrincOrder {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    /// `(x, y)` with `congruences[k] = con(x, y)`.
    pub fn witnesses(&self) -> &[(usize, usize)] {
        &self.witnesses
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|d| d == c)
    }

    /// The refinement order, elements named `con(x,y)` after their witness.
    pub fn to_poset(&self, lat: &FiniteLattice) -> Poset {
        let names = self
            .witnesses
            .iter()
            .map(|&(x, y)| format!("con({},{})", lat.name(x), lat.name(y)))
            .collect();
        Poset::from_relation(names, |a, b| {
            self.congruences[a].refines(&self.congruences[b])
        })
        .expect("refinement is an order")
    }
}

/// All principal congruences `con(x, y)`, deduplicated. The witness kept for
/// each is the first pair `x ≤ y` in positional order; `con(x, y)` equals
/// `con(x∧y, x∨y)` so comparable pairs suffice.
pub fn princ_order(lat: &FiniteLattice) -> PrincOrder {
    let n = lat.len();
    let mut seen: HashMap<Congruence, usize> = HashMap::new();
    let mut congruences = Vec::new();
    let mut witnesses = Vec::new();
    let bottom = lat.bottom();
    let zero = Congruence::zero(n);
    seen.insert(zero.clone(), 0);
    congruences.push(zero);
    witnesses.push((bottom, bottom));
    for x in 0..n {
        for y in lat.poset().up(x).ones() {
            if y == x {
                continue;
            }
            let c = principal_congruence(lat, x, y);
            if !seen.contains_key(&c) {
                seen.insert(c.clone(), congruences.len());
                congruences.push(c);
                witnesses.push((x, y));
            }
        }
    }
    // finest first, stable on discovery order otherwise
    let mut idx: Vec<usize> = (0..congruences.len()).collect();
    idx.sort_by_key(|&k| (std::cmp::Reverse(congruences[k].num_blocks()), k));
    PrincOrder {
        congruences: idx.iter().map(|&k| congruences[k].clone()).collect(),
        witnesses: idx.iter().map(|&k| witnesses[k]).collect(),
    }
}

/// `v(α)`: the least number of principal congruences whose join is `α`.
#[derive(Clone, Debug)]
pub struct Valuation {
    order: ConOrder,
    values: Vec<usize>,
}

impl Valuation {
    pub fn order(&self) -> &ConOrder {
        &self.order
    }

    /// Values aligned with `order().congruences()`.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, c: &Congruence) -> Option<usize> {
        self.order.position(c).map(|k| self.values[k])
    }
}

/// Breadth-first search over join layers: layer `k` holds the congruences
/// first reached as a join of `k` principal congruences.
pub fn valuation(lat: &FiniteLattice) -> Result<Valuation> {
    let n = lat.len();
    let order = all_congruences(lat);
    let principal: Vec<Congruence> = princ_order(lat)
        .congruences()
        .iter()
        .filter(|c| !c.is_zero())
        .cloned()
        .collect();
    let mut values = vec![usize::MAX; order.len()];
    let zero = order
        .position(&Congruence::zero(n))
        .expect("zero is a congruence");
    values[zero] = 0;
    let mut frontier = vec![Congruence::zero(n)];
    let cap = (n * n).max(1);
    let mut layer = 0;
    while !frontier.is_empty() {
        layer += 1;
        if layer > cap {
            return Err(Error::ValuationDiverged(cap));
        }
        let mut next = Vec::new();
        for alpha in &frontier {
            for pi in &principal {
                if pi.refines(alpha) {
                    continue;
                }
                let j = join_congruences(lat, alpha, pi);
                let k = order.position(&j).ok_or_else(|| {
                    Error::NotACongruence("join escaped the congruence lattice".into())
                })?;
                if values[k] == usize::MAX {
                    values[k] = layer;
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    if let Some(k) = values.iter().position(|&v| v == usize::MAX) {
        return Err(Error::NotACongruence(format!(
            "congruence #{k} is not a join of principal congruences"
        )));
    }
    Ok(Valuation { order, values })
}
