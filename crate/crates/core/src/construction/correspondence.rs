//! `Base`, the congruences `β_H`, and the isomorphism `φ: Con K → Down⁻P`.

use fixedbitset::FixedBitSet;

use super::{Construction, TemplateKind, Templates};
use crate::congruence::{
    all_congruences, is_i_congruence, principal_congruence, ConOrder, Congruence,
};
use crate::error::{Error, Result};
use crate::order::DownSet;

/// `Base(β)`: the interior elements `p` with `a_p ≡ b_p (β)`, as positions
/// of `P` in increasing order.
pub fn base(k: &Construction, beta: &Congruence) -> Result<Vec<usize>> {
    if !is_i_congruence(k.lattice(), beta) {
        return Err(Error::NotICongruence);
    }
    Ok(k.source()
        .interior()
        .iter()
        .copied()
        .filter(|&p| {
            let (a, b) = k.anchor(p);
            beta.related(a, b)
        })
        .collect())
}

/// `β_H` for a down set `H` of `P⁻` (positions of `P`).
///
/// The relation is assembled gadget by gadget: `con(a_p, b_p)` for isolated
/// `p ∈ H`, and inside each `S(p,q)` the gadget's own `con(a_q, b_q)` when
/// `q ∈ H`, else its `con(a_p, b_p)` when `p ∈ H`. The union must already be
/// an equivalence whose blocks are chains of at most three elements, and it
/// must pass the full substitution check on `K`.
pub fn beta_h(k: &Construction, templates: &Templates, h: &[usize]) -> Result<Congruence> {
    let src = k.source();
    let l = k.lattice();
    let n = l.len();
    let mut in_h = FixedBitSet::with_capacity(src.len());
    for &p in h {
        if !src.interior().contains(&p) {
            return Err(Error::NotADownSet(src.poset().name(p).to_owned()));
        }
        in_h.insert(p);
    }
    for &p in h {
        if let Some(q) = src
            .interior()
            .iter()
            .find(|&&q| src.poset().lt(q, p) && !in_h.contains(q))
        {
            return Err(Error::NotADownSet(src.poset().name(*q).to_owned()));
        }
    }

    let s = templates.s();
    let sl = s.lattice();
    let gadget_p = principal_congruence(sl, s.at("a_p"), s.at("b_p"));
    let gadget_q = principal_congruence(sl, s.at("a_q"), s.at("b_q"));

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &p in src.isolated() {
        if in_h.contains(p) {
            pairs.push(k.anchor(p));
        }
    }
    for inst in k.instances().iter().filter(|i| i.kind == TemplateKind::S) {
        let (p, q) = (inst.params[0], inst.params[1]);
        let theta = if in_h.contains(q) {
            &gadget_q
        } else if in_h.contains(p) {
            &gadget_p
        } else {
            continue;
        };
        for b in theta.blocks() {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    pairs.push((inst.embedding[x], inst.embedding[y]));
                }
            }
        }
    }
    let blocks: Vec<Vec<usize>> = pairs.iter().map(|&(x, y)| vec![x, y]).collect();
    let beta = Congruence::from_blocks(n, &blocks);

    // transitivity of the raw union: every pair of the closure was listed
    let mut listed = std::collections::HashSet::new();
    for &(x, y) in &pairs {
        listed.insert((x.min(y), x.max(y)));
    }
    for b in beta.blocks() {
        if b.len() > 3 {
            return Err(Error::NotACongruence(format!(
                "a block of β_H has {} elements",
                b.len()
            )));
        }
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                if !listed.contains(&(x.min(y), x.max(y))) {
                    return Err(Error::NotACongruence(format!(
                        "the union is not transitive at ({}, {})",
                        l.name(x),
                        l.name(y)
                    )));
                }
                if !l.poset().comparable(x, y) {
                    return Err(Error::NotACongruence(format!(
                        "block of β_H is not a chain: {} ∥ {}",
                        l.name(x),
                        l.name(y)
                    )));
                }
            }
        }
    }
    beta.check(l)?;
    Ok(beta)
}

/// `φ` and its inverse, tabulated over all of `Con K`.
#[derive(Clone, Debug)]
pub struct IsoCorrespondence {
    con: ConOrder,
    down: Vec<DownSet>,
}

impl IsoCorrespondence {
    pub fn con(&self) -> &ConOrder {
        &self.con
    }

    /// Pairs `(β, φ(β))` in the order of `con().congruences()`.
    pub fn pairs(&self) -> impl Iterator<Item = (&Congruence, &DownSet)> {
        self.con.congruences().iter().zip(&self.down)
    }

    pub fn forward(&self, beta: &Congruence) -> Option<&DownSet> {
        self.con.position(beta).map(|k| &self.down[k])
    }

    pub fn backward(&self, d: &DownSet) -> Option<&Congruence> {
        self.down
            .iter()
            .position(|x| x == d)
            .map(|k| self.con.get(k))
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }
}

/// Pairs every congruence of `K` with a nonempty down set of `P`: zero with
/// `{0}`, one with `P`, an I-congruence `β` with `{0} ∪ Base(β)`. Checks that
/// this is a bijection onto `Down⁻P` and that it preserves and reflects the
/// order, and that each down set's preimage is `β_H`.
pub fn phi(k: &Construction, templates: &Templates) -> Result<IsoCorrespondence> {
    let src = k.source();
    let p = src.poset();
    let l = k.lattice();
    let con = all_congruences(l);
    let mut down = Vec::with_capacity(con.len());
    for beta in con.congruences() {
        let mut members = FixedBitSet::with_capacity(p.len());
        if beta.is_one() {
            members.insert_range(..);
        } else if beta.is_zero() {
            members.insert(src.zero());
        } else if is_i_congruence(l, beta) {
            members.insert(src.zero());
            for q in base(k, beta)? {
                members.insert(q);
            }
        } else {
            return Err(Error::CorrespondenceBroken(format!(
                "congruence {:?} is neither 0, 1 nor an I-congruence",
                beta.nontrivial_named_blocks(l)
            )));
        }
        let d = DownSet::new(p, members).map_err(|e| {
            Error::CorrespondenceBroken(format!(
                "Base of {:?} is not a down set: {e}",
                beta.nontrivial_named_blocks(l)
            ))
        })?;
        down.push(d);
    }
    let all = p.down_sets(true);
    let mut image = down.clone();
    image.sort();
    image.dedup();
    if image.len() != down.len() {
        return Err(Error::CorrespondenceBroken(
            "two congruences share a down set".into(),
        ));
    }
    if image.len() != all.len() {
        return Err(Error::CorrespondenceBroken(format!(
            "|Con K| = {} but P has {} nonempty down sets",
            con.len(),
            all.len()
        )));
    }
    for d in &all {
        if !image.contains(d) {
            return Err(Error::CorrespondenceBroken(format!(
                "down set {:?} has no preimage",
                d.names(p)
            )));
        }
    }
    for a in 0..con.len() {
        for b in 0..con.len() {
            if con.leq(a, b) != down[a].is_subset(&down[b]) {
                return Err(Error::CorrespondenceBroken(format!(
                    "order not preserved between {:?} and {:?}",
                    down[a].names(p),
                    down[b].names(p)
                )));
            }
        }
    }
    for (a, d) in down.iter().enumerate() {
        if d.contains(src.one()) {
            continue;
        }
        let h: Vec<usize> = d.iter().filter(|&x| x != src.zero()).collect();
        let bh = beta_h(k, templates, &h)?;
        if &bh != con.get(a) {
            return Err(Error::CorrespondenceBroken(format!(
                "β_H differs from the preimage of {:?}",
                d.names(p)
            )));
        }
    }
    Ok(IsoCorrespondence { con, down })
}
