//! The lattice `K` with `Princ K ≅ P` for a finite bounded order `P`.
//!
//! Every interior element `p` gets an anchor chain `a@p < b@p`; every strict
//! comparability `p < q` of `P⁻` gets a copy of the gadget `S` with the five
//! extra elements `c@p.q … g@p.q`; every isolated `p` gets the chain
//! `o < a@p < b@p < i`; and two atoms `a@0`, `a@1` complementary to
//! everything are added. The order of `K` is the transitive closure of the
//! gadget orders. Lattice-hood and sublattice-hood of every gadget and
//! amalgam instance are checked, not assumed.

mod correspondence;
mod templates;
mod verify;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::order::{BoundedPoset, Poset};

pub use correspondence::{base, beta_h, phi, IsoCorrespondence};
pub use templates::{Check, GadgetTemplate, TemplateKind, Templates};
pub use verify::{verify_theorem, Report, Stage};

use templates::embeds;

/// One placed copy of a template inside `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: TemplateKind,
    /// Parameters from `P`, as positions: `[p]` for `Cp`, `[p, q]` for `S`
    /// and the frame, three for the amalgams in the order `p, q, q'` (SC and
    /// SV) or `p, p', q` (SH).
    pub params: Vec<usize>,
    /// Template position to position in `K`.
    pub embedding: Vec<usize>,
}

impl Instance {
    pub fn label(&self, p: &Poset) -> String {
        let names: Vec<&str> = self.params.iter().map(|&x| p.name(x)).collect();
        format!("{}({})", self.kind, names.join(","))
    }
}

/// The assembled lattice with its bookkeeping.
#[derive(Clone, Debug)]
pub struct Construction {
    lattice: FiniteLattice,
    source: BoundedPoset,
    anchors: Vec<(usize, usize)>,
    instances: Vec<Instance>,
    membership: Vec<Vec<usize>>,
}

impl Construction {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn source(&self) -> &BoundedPoset {
        &self.source
    }

    /// `(a_p, b_p)` for a position `p` of `P`; `a_0 = b_0` and `a_1 = b_1`.
    pub fn anchor(&self, p: usize) -> (usize, usize) {
        self.anchors[p]
    }

    pub fn anchors(&self) -> &[(usize, usize)] {
        &self.anchors
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// Instances containing the element `x` of `K`.
    pub fn membership(&self, x: usize) -> &[usize] {
        &self.membership[x]
    }

    /// True for the one- and two-element chains built when `|P| ≤ 2`.
    pub fn is_degenerate(&self) -> bool {
        self.source.interior().is_empty()
    }

    pub fn count(&self, kind: TemplateKind) -> usize {
        self.instances.iter().filter(|i| i.kind == kind).count()
    }

    /// Strict comparabilities of `K` that do not hold inside any single
    /// gadget (`S` or `Cp`) and do not involve a bound.
    pub fn unattributed_comparabilities(&self) -> Vec<(usize, usize)> {
        let l = &self.lattice;
        let mut attributed = BTreeSet::new();
        for inst in &self.instances {
            if !matches!(inst.kind, TemplateKind::S | TemplateKind::Cp) {
                continue;
            }
            for &x in &inst.embedding {
                for &y in &inst.embedding {
                    attributed.insert((x, y));
                }
            }
        }
        let (o, i) = (l.bottom(), l.top());
        let mut out = Vec::new();
        for x in 0..l.len() {
            for y in l.poset().up(x).ones() {
                if x != y && x != o && y != i && !attributed.contains(&(x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Anchors as names, keyed by element names of `P`.
    pub fn anchor_names(&self) -> Vec<(String, String, String)> {
        let p = self.source.poset();
        (0..p.len())
            .map(|x| {
                let (a, b) = self.anchors[x];
                (
                    p.name(x).to_owned(),
                    self.lattice.name(a).to_owned(),
                    self.lattice.name(b).to_owned(),
                )
            })
            .collect()
    }
}

/// Names of template elements once placed with the given parameters.
struct Placement<'a> {
    p: &'a Poset,
    letters: Vec<(&'static str, usize)>,
    pairs: Vec<(usize, usize)>,
}

impl Placement<'_> {
    fn name(&self, role: &str) -> String {
        match role {
            "o" | "i" => role.to_owned(),
            _ if role.starts_with("a_") || role.starts_with("b_") => {
                let letter = &role[2..];
                let x = self
                    .letters
                    .iter()
                    .find(|(l, _)| *l == letter)
                    .map(|&(_, x)| x)
                    .expect("role letters validated at load");
                format!("{}@{}", &role[..1], self.p.name(x))
            }
            _ => {
                let (letter, pair) = match role.strip_suffix('\'') {
                    Some(r) => (r, self.pairs[1]),
                    None => (role, self.pairs[0]),
                };
                format!("{letter}@{}.{}", self.p.name(pair.0), self.p.name(pair.1))
            }
        }
    }
}

/// Builds `K` from `P`.
pub fn assemble_k(source: &BoundedPoset, templates: &Templates) -> Result<Construction> {
    let p = source.poset();
    if source.interior().is_empty() {
        return Ok(degenerate(source));
    }
    let interior = source.interior();
    let comps = source.interior_comparabilities();
    let pn = |x: usize| p.name(x);

    let mut names = vec![
        "o".to_owned(),
        format!("a@{}", pn(source.zero())),
        format!("a@{}", pn(source.one())),
    ];
    for &x in interior {
        names.push(format!("a@{}", pn(x)));
        names.push(format!("b@{}", pn(x)));
    }
    for &(x, y) in &comps {
        for g in ["c", "d", "e", "f", "g"] {
            names.push(format!("{g}@{}.{}", pn(x), pn(y)));
        }
    }
    names.push("i".to_owned());
    let mut index = HashMap::with_capacity(names.len());
    for (k, n) in names.iter().enumerate() {
        if index.insert(n.clone(), k).is_some() {
            return Err(Error::InvalidInput(format!(
                "element names of P produce the same name `{n}` twice in K"
            )));
        }
    }

    let mut plans: Vec<(TemplateKind, Vec<usize>, Placement)> = Vec::new();
    for &x in source.isolated() {
        plans.push((
            TemplateKind::Cp,
            vec![x],
            Placement {
                p,
                letters: vec![("p", x)],
                pairs: vec![],
            },
        ));
    }
    for &(x, y) in &comps {
        plans.push((
            TemplateKind::S,
            vec![x, y],
            Placement {
                p,
                letters: vec![("p", x), ("q", y)],
                pairs: vec![(x, y)],
            },
        ));
    }
    for (k, &x) in interior.iter().enumerate() {
        for &y in &interior[k + 1..] {
            plans.push((
                TemplateKind::Frame,
                vec![x, y],
                Placement {
                    p,
                    letters: vec![
                        ("p", x),
                        ("q", y),
                        ("0", source.zero()),
                        ("1", source.one()),
                    ],
                    pairs: vec![],
                },
            ));
        }
    }
    for &(x, y) in &comps {
        for &(u, v) in &comps {
            let (kind, params, letters, pairs) = if y == u {
                (
                    TemplateKind::SC,
                    vec![x, y, v],
                    vec![("p", x), ("q", y), ("q'", v)],
                    vec![(x, y), (y, v)],
                )
            } else if x == u && y < v {
                (
                    TemplateKind::SV,
                    vec![x, y, v],
                    vec![("p", x), ("q", y), ("q'", v)],
                    vec![(x, y), (x, v)],
                )
            } else if y == v && x < u {
                (
                    TemplateKind::SH,
                    vec![x, u, y],
                    vec![("p", x), ("p'", u), ("q", y)],
                    vec![(x, y), (u, y)],
                )
            } else {
                continue;
            };
            plans.push((kind, params, Placement { p, letters, pairs }));
        }
    }

    let lookup = |n: &str| -> Result<usize> {
        index.get(n).copied().ok_or_else(|| {
            Error::AssemblyNotALattice(format!("template places unknown element `{n}`"))
        })
    };
    let mut instances = Vec::with_capacity(plans.len());
    for (kind, params, placement) in &plans {
        let t = templates.get(*kind);
        let embedding = t
            .roles()
            .iter()
            .map(|r| lookup(&placement.name(r)))
            .collect::<Result<Vec<_>>>()?;
        instances.push(Instance {
            kind: *kind,
            params: params.clone(),
            embedding,
        });
    }

    let mut covers = Vec::new();
    let (o, a0, a1, i) = (0, 1, 2, names.len() - 1);
    covers.extend([(o, a0), (o, a1), (a0, i), (a1, i)]);
    for inst in &instances {
        if !matches!(inst.kind, TemplateKind::S | TemplateKind::Cp) {
            continue;
        }
        let t = templates.get(inst.kind).lattice();
        for (x, y) in t.poset().covers() {
            covers.push((inst.embedding[x], inst.embedding[y]));
        }
    }
    let order = Poset::from_index_covers(names, &covers)
        .map_err(|e| Error::AssemblyNotALattice(e.to_string()))?;
    let lattice =
        FiniteLattice::from_poset(order).map_err(|e| Error::AssemblyNotALattice(e.to_string()))?;

    for inst in &instances {
        if !embeds(
            templates.get(inst.kind).lattice(),
            &lattice,
            &inst.embedding,
        ) {
            return Err(Error::AssemblyNotALattice(format!(
                "{} is not a sublattice of K",
                inst.label(p)
            )));
        }
    }

    let mut anchors = vec![(0, 0); p.len()];
    anchors[source.zero()] = (a0, a0);
    anchors[source.one()] = (a1, a1);
    for &x in interior {
        anchors[x] = (
            index[&format!("a@{}", pn(x))],
            index[&format!("b@{}", pn(x))],
        );
    }
    let mut membership = vec![Vec::new(); lattice.len()];
    for (k, inst) in instances.iter().enumerate() {
        for &x in &inst.embedding {
            membership[x].push(k);
        }
    }
    Ok(Construction {
        lattice,
        source: source.clone(),
        anchors,
        instances,
        membership,
    })
}

fn degenerate(source: &BoundedPoset) -> Construction {
    let n = source.len();
    let names: Vec<String> = ["o", "i"][..n].iter().map(|s| s.to_string()).collect();
    let covers: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { vec![] };
    let order = Poset::from_index_covers(names, &covers).expect("a chain");
    let lattice = FiniteLattice::from_poset(order).expect("a chain is a lattice");
    let mut anchors = vec![(0, 0); n];
    anchors[source.one()] = (n - 1, n - 1);
    Construction {
        membership: vec![Vec::new(); n],
        lattice,
        source: source.clone(),
        anchors,
        instances: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounded(els: &[&str], covers: &[(&str, &str)]) -> BoundedPoset {
        BoundedPoset::new(Poset::from_covers(els, covers).unwrap()).unwrap()
    }

    #[test]
    fn degenerate_chains() {
        let t = Templates::builtin().unwrap();
        let one = assemble_k(&bounded(&["0"], &[]), &t).unwrap();
        assert_eq!(one.lattice().len(), 1);
        let two = assemble_k(&bounded(&["0", "1"], &[("0", "1")]), &t).unwrap();
        assert_eq!(two.lattice().len(), 2);
        assert!(two.is_degenerate());
    }

    #[test]
    fn b2_has_eight_elements() {
        let t = Templates::builtin().unwrap();
        let b2 = bounded(
            &["0", "p", "q", "1"],
            &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")],
        );
        let k = assemble_k(&b2, &t).unwrap();
        assert_eq!(k.lattice().len(), 8);
        assert_eq!(k.lattice().length(), 3);
        assert_eq!(k.count(TemplateKind::Cp), 2);
    }

    #[test]
    fn four_chain_has_thirteen_elements() {
        let t = Templates::builtin().unwrap();
        let c4 = bounded(&["0", "p", "q", "1"], &[("0", "p"), ("p", "q"), ("q", "1")]);
        let k = assemble_k(&c4, &t).unwrap();
        assert_eq!(k.lattice().len(), 13);
        assert_eq!(k.lattice().length(), 5);
        assert_eq!(k.count(TemplateKind::S), 1);
        let (a, b) = k.anchor(1);
        assert_eq!((k.lattice().name(a), k.lattice().name(b)), ("a@p", "b@p"));
    }

    #[test]
    fn name_collisions_are_input_errors() {
        let t = Templates::builtin().unwrap();
        // p < q.r and p.q < r both name their gadget elements `c@p.q.r`.
        let p = bounded(&["0", "x", "1"], &[("0", "x"), ("x", "1")]);
        assert!(assemble_k(&p, &t).is_ok());
        let p = bounded(
            &["0", "p", "p.q", "q", "q.r", "r", "1"],
            &[
                ("0", "p"),
                ("p", "q.r"),
                ("0", "p.q"),
                ("p.q", "r"),
                ("q.r", "1"),
                ("r", "1"),
                ("0", "q"),
                ("q", "1"),
            ],
        );
        assert!(matches!(assemble_k(&p, &t), Err(Error::InvalidInput(_))));
    }
}
