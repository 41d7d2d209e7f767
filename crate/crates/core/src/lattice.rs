//! Finite lattices with dense join and meet tables.

use fixedbitset::FixedBitSet;

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::order::{order_iso, Poset};

/// A finite lattice. Join and meet are stored as `n × n` tables computed
/// once from the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: Poset,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: usize,
    top: usize,
}

/// A prime interval `lower ≺ upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalEdge {
    pub lower: usize,
    pub upper: usize,
}

impl FiniteLattice {
    /// Computes the join and meet tables of `poset`, failing with a witness
    /// pair when some least upper bound or greatest lower bound is missing.
    pub fn from_poset(poset: Poset) -> Result<FiniteLattice> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "the empty order is not a lattice".into(),
            ));
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let j = extremum(&poset, x, y, true)?;
                let m = extremum(&poset, x, y, false)?;
                join[x * n + y] = j as u32;
                join[y * n + x] = j as u32;
                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
            }
        }
        let bottom = poset.minimum().expect("a nonempty lattice has a bottom");
        let top = poset.maximum().expect("a nonempty lattice has a top");
        Ok(FiniteLattice {
            poset,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// The `n`-element chain `c0 < c1 < … `.
    pub fn chain(n: usize) -> FiniteLattice {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let p = Poset::from_index_covers(names, &covers).unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    /// The diamond `M3`: `o < x, y, z < i`.
    pub fn m3() -> FiniteLattice {
        let p = Poset::from_covers(
            &["o", "x", "y", "z", "i"],
            &[
                ("o", "x"),
                ("o", "y"),
                ("o", "z"),
                ("x", "i"),
                ("y", "i"),
                ("z", "i"),
            ],
        )
        .unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    /// The direct product of two lattices, elements named `(x,y)`.
    pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> FiniteLattice {
        let (n, m) = (a.len(), b.len());
        let mut names = Vec::with_capacity(n * m);
        for x in 0..n {
            for y in 0..m {
                names.push(format!("({},{})", a.name(x), b.name(y)));
            }
        }
        let p =
            Poset::from_relation(names, |u, v| a.leq(u / m, v / m) && b.leq(u % m, v % m)).unwrap();
        FiniteLattice::from_poset(p).unwrap()
    }

    /// `C2 × C3`.
    pub fn c2xc3() -> FiniteLattice {
        FiniteLattice::product(&FiniteLattice::chain(2), &FiniteLattice::chain(3))
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        self.poset.name(x)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.poset.index(name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.poset.require(name)
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }

    /// `o`
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// `i`
    pub fn top(&self) -> usize {
        self.top
    }

    /// Number of covers on a longest chain.
    pub fn length(&self) -> usize {
        self.poset.heights()[self.top]
    }

    /// All cover pairs, sorted by `(lower, upper)`.
    pub fn prime_intervals(&self) -> Vec<IntervalEdge> {
        self.poset
            .covers()
            .into_iter()
            .map(|(lower, upper)| IntervalEdge { lower, upper })
            .collect()
    }

    /// Closed under join and meet (and nonempty).
    pub fn is_sublattice(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        let mut set = FixedBitSet::with_capacity(self.len());
        for &x in subset {
            set.insert(x);
        }
        subset.iter().all(|&x| {
            subset
                .iter()
                .all(|&y| set.contains(self.join(x, y)) && set.contains(self.meet(x, y)))
        })
    }

    /// A sublattice containing both bounds.
    pub fn is_01_sublattice(&self, subset: &[usize]) -> bool {
        subset.contains(&self.bottom) && subset.contains(&self.top) && self.is_sublattice(subset)
    }

    /// The lattice induced on a sublattice; `None` if `subset` is not one.
    pub fn sublattice(&self, subset: &[usize]) -> Option<FiniteLattice> {
        if !self.is_sublattice(subset) {
            return None;
        }
        FiniteLattice::from_poset(self.poset.restrict(subset)).ok()
    }

    /// The quotient lattice `L/θ`. Blocks are named after their least member.
    pub fn quotient(&self, theta: &Congruence) -> Result<FiniteLattice> {
        theta.check(self)?;
        let reps = theta.representatives();
        let names = reps.iter().map(|&r| self.name(r).to_owned()).collect();
        let p = Poset::from_relation(names, |a, b| {
            theta.related(self.meet(reps[a], reps[b]), reps[a])
        })?;
        FiniteLattice::from_poset(p)
    }

    /// Exhaustive check of the lattice identities against the tables.
    pub fn check_identities(&self) -> std::result::Result<(), String> {
        let n = self.len();
        for x in 0..n {
            if self.join(x, x) != x || self.meet(x, x) != x {
                return Err(format!("idempotence fails at {}", self.name(x)));
            }
            if !self.leq(self.bottom, x) || !self.leq(x, self.top) {
                return Err(format!("bounds fail at {}", self.name(x)));
            }
            for y in 0..n {
                if self.join(x, y) != self.join(y, x) || self.meet(x, y) != self.meet(y, x) {
                    return Err(format!(
                        "commutativity fails at {},{}",
                        self.name(x),
                        self.name(y)
                    ));
                }
                if self.meet(x, self.join(x, y)) != x || self.join(x, self.meet(x, y)) != x {
                    return Err(format!(
                        "absorption fails at {},{}",
                        self.name(x),
                        self.name(y)
                    ));
                }
                if self.leq(x, y) != (self.join(x, y) == y) {
                    return Err(format!(
                        "order/join mismatch at {},{}",
                        self.name(x),
                        self.name(y)
                    ));
                }
                for z in 0..n {
                    if self.join(self.join(x, y), z) != self.join(x, self.join(y, z))
                        || self.meet(self.meet(x, y), z) != self.meet(x, self.meet(y, z))
                    {
                        return Err(format!(
                            "associativity fails at {},{},{}",
                            self.name(x),
                            self.name(y),
                            self.name(z)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn extremum(poset: &Poset, x: usize, y: usize, upper: bool) -> Result<usize> {
    let (a, b) = if upper {
        (poset.up(x), poset.up(y))
    } else {
        (poset.down(x), poset.down(y))
    };
    let mut common = a.clone();
    common.intersect_with(b);
    let size = common.count_ones(..);
    // The least upper bound u is exactly the bound whose own up set is the
    // whole set of common upper bounds (dually for meets).
    let found = common.ones().find(|&u| {
        let own = if upper { poset.up(u) } else { poset.down(u) };
        own.count_ones(..) == size
    });
    found.ok_or_else(|| {
        let minimal: Vec<String> = common
            .ones()
            .filter(|&u| {
                common.ones().all(|v| {
                    v == u
                        || if upper {
                            !poset.leq(v, u)
                        } else {
                            !poset.leq(u, v)
                        }
                })
            })
            .map(|u| poset.name(u).to_owned())
            .collect();
        Error::NotALattice {
            x: poset.name(x).to_owned(),
            y: poset.name(y).to_owned(),
            op: if upper { "join" } else { "meet" },
            candidates: minimal,
        }
    })
}

/// A join- and meet-preserving bijection `L -> M`, if one exists.
pub fn lattice_iso(l: &FiniteLattice, m: &FiniteLattice) -> Option<Vec<usize>> {
    let map = order_iso(l.poset(), m.poset())?;
    // An order isomorphism between lattices preserves both operations; the
    // check guards the tables themselves.
    let n = l.len();
    for x in 0..n {
        for y in 0..n {
            if map[l.join(x, y)] != m.join(map[x], map[y])
                || map[l.meet(x, y)] != m.meet(map[x], map[y])
            {
                return None;
            }
        }
    }
    Some(map)
}
