//! Gadget templates: small lattices over placeholder elements, each tagged
//! with a role. The cover data lives in `templates/*.json` next to a
//! `*.roles.json` sidecar; every template is checked when loaded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use crate::congruence::{all_congruences, is_i_congruence, principal_congruence};
use crate::error::{Error, Result};
use crate::io::PosetFile;
use crate::lattice::{lattice_iso, FiniteLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateKind {
    /// The gadget `S(p,q)` for `p < q`.
    S,
    /// Two gadgets along a chain `p < q < q'`.
    SC,
    /// Two gadgets with a common lower end: `p < q`, `p < q'`.
    SV,
    /// Two gadgets with a common upper end: `p < q`, `p' < q`.
    SH,
    /// The four-element chain for an isolated element.
    Cp,
    /// The frame: every anchor chain plus `a_0`, `a_1`, pairwise complementary.
    Frame,
}

impl TemplateKind {
    pub const ALL: [TemplateKind; 6] = [
        TemplateKind::Frame,
        TemplateKind::Cp,
        TemplateKind::S,
        TemplateKind::SC,
        TemplateKind::SV,
        TemplateKind::SH,
    ];

    /// File stem under the template directory.
    pub fn stem(self) -> &'static str {
        match self {
            TemplateKind::S => "S",
            TemplateKind::SC => "SC",
            TemplateKind::SV => "SV",
            TemplateKind::SH => "SH",
            TemplateKind::Cp => "Cp",
            TemplateKind::Frame => "frame",
        }
    }

    fn required_roles(self) -> Vec<&'static str> {
        const S: [&str; 11] = [
            "o", "i", "a_p", "b_p", "a_q", "b_q", "c", "d", "e", "f", "g",
        ];
        const SECOND: [&str; 5] = ["c'", "d'", "e'", "f'", "g'"];
        let mut v: Vec<&'static str> = match self {
            TemplateKind::Cp => vec!["o", "a_p", "b_p", "i"],
            TemplateKind::Frame => vec!["o", "i", "a_0", "a_1", "a_p", "b_p", "a_q", "b_q"],
            _ => S.to_vec(),
        };
        match self {
            TemplateKind::SC | TemplateKind::SV => v.extend(["a_q'", "b_q'"]),
            TemplateKind::SH => v.extend(["a_p'", "b_p'"]),
            _ => {}
        }
        if matches!(self, TemplateKind::SC | TemplateKind::SV | TemplateKind::SH) {
            v.extend(SECOND);
        }
        v
    }

    /// For an amalgam, how the roles of the second `S` copy are renamed.
    fn second_copy(self, role: &str) -> String {
        let anchors: &[(&str, &str)] = match self {
            TemplateKind::SC => &[
                ("a_p", "a_q"),
                ("b_p", "b_q"),
                ("a_q", "a_q'"),
                ("b_q", "b_q'"),
            ],
            TemplateKind::SV => &[
                ("a_p", "a_p"),
                ("b_p", "b_p"),
                ("a_q", "a_q'"),
                ("b_q", "b_q'"),
            ],
            TemplateKind::SH => &[
                ("a_p", "a_p'"),
                ("b_p", "b_p'"),
                ("a_q", "a_q"),
                ("b_q", "b_q"),
            ],
            _ => &[],
        };
        if let Some((_, to)) = anchors.iter().find(|(from, _)| *from == role) {
            return (*to).to_owned();
        }
        match role {
            "o" | "i" => role.to_owned(),
            _ => format!("{role}'"),
        }
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stem())
    }
}

/// A template lattice with a role per element.
#[derive(Clone, Debug)]
pub struct GadgetTemplate {
    kind: TemplateKind,
    lattice: FiniteLattice,
    roles: Vec<String>,
    by_role: BTreeMap<String, usize>,
}

impl GadgetTemplate {
    fn parse(kind: TemplateKind, order_json: &str, roles_json: &str) -> Result<GadgetTemplate> {
        let invalid = |check: String| Error::TemplateInvalid {
            name: kind.stem().to_owned(),
            check,
        };
        let file = PosetFile::parse(order_json).map_err(|e| invalid(format!("parse: {e}")))?;
        let poset = file
            .to_poset()
            .map_err(|e| invalid(format!("order: {e}")))?;
        let lattice =
            FiniteLattice::from_poset(poset).map_err(|e| invalid(format!("lattice: {e}")))?;
        let role_map: BTreeMap<String, String> =
            serde_json::from_str(roles_json).map_err(|e| invalid(format!("roles: {e}")))?;
        let mut roles = Vec::with_capacity(lattice.len());
        for x in 0..lattice.len() {
            let r = role_map
                .get(lattice.name(x))
                .ok_or_else(|| invalid(format!("no role for `{}`", lattice.name(x))))?;
            roles.push(r.clone());
        }
        if role_map.len() != lattice.len() {
            return Err(invalid("role map names elements that do not exist".into()));
        }
        let mut by_role = BTreeMap::new();
        for (x, r) in roles.iter().enumerate() {
            if by_role.insert(r.clone(), x).is_some() {
                return Err(invalid(format!("role `{r}` used twice")));
            }
        }
        let have: BTreeSet<&str> = by_role.keys().map(|s| s.as_str()).collect();
        let want: BTreeSet<&str> = kind.required_roles().into_iter().collect();
        if have != want {
            return Err(invalid(format!(
                "roles {:?}, expected {:?}",
                have.iter().collect::<Vec<_>>(),
                want.iter().collect::<Vec<_>>()
            )));
        }
        let t = GadgetTemplate {
            kind,
            lattice,
            roles,
            by_role,
        };
        if t.at("o") != t.lattice.bottom() || t.at("i") != t.lattice.top() {
            return Err(invalid("roles o and i must be the bounds".into()));
        }
        Ok(t)
    }

    pub fn kind(&self) -> TemplateKind {
        self.kind
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn role(&self, x: usize) -> &str {
        &self.roles[x]
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    /// Position of the element carrying `role`. Panics on an unknown role;
    /// the role set is validated at load.
    pub fn at(&self, role: &str) -> usize {
        self.by_role[role]
    }

    pub fn try_at(&self, role: &str) -> Option<usize> {
        self.by_role.get(role).copied()
    }
}

/// One named check of a template suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

/// The full set of templates needed by the construction.
#[derive(Clone, Debug)]
pub struct Templates {
    frame: GadgetTemplate,
    cp: GadgetTemplate,
    s: GadgetTemplate,
    sc: GadgetTemplate,
    sv: GadgetTemplate,
    sh: GadgetTemplate,
    suite: Vec<Check>,
}

const BUILTIN: [(TemplateKind, &str, &str); 6] = [
    (
        TemplateKind::Frame,
        include_str!("../../templates/frame.json"),
        include_str!("../../templates/frame.roles.json"),
    ),
    (
        TemplateKind::Cp,
        include_str!("../../templates/Cp.json"),
        include_str!("../../templates/Cp.roles.json"),
    ),
    (
        TemplateKind::S,
        include_str!("../../templates/S.json"),
        include_str!("../../templates/S.roles.json"),
    ),
    (
        TemplateKind::SC,
        include_str!("../../templates/SC.json"),
        include_str!("../../templates/SC.roles.json"),
    ),
    (
        TemplateKind::SV,
        include_str!("../../templates/SV.json"),
        include_str!("../../templates/SV.roles.json"),
    ),
    (
        TemplateKind::SH,
        include_str!("../../templates/SH.json"),
        include_str!("../../templates/SH.roles.json"),
    ),
];

impl Templates {
    /// The templates shipped with the crate.
    pub fn builtin() -> Result<Templates> {
        Templates::from_sources(|kind| {
            let (_, order, roles) = BUILTIN
                .iter()
                .find(|(k, _, _)| *k == kind)
                .expect("all kinds");
            Ok((order.to_string(), roles.to_string()))
        })
    }

    /// Templates from `dir/<stem>.json` and `dir/<stem>.roles.json`.
    pub fn load(dir: &Path) -> Result<Templates> {
        Templates::from_sources(|kind| {
            let read = |file: String| {
                std::fs::read_to_string(dir.join(&file)).map_err(|e| Error::TemplateInvalid {
                    name: kind.stem().to_owned(),
                    check: format!("{file}: {e}"),
                })
            };
            Ok((
                read(format!("{}.json", kind.stem()))?,
                read(format!("{}.roles.json", kind.stem()))?,
            ))
        })
    }

    fn from_sources(
        source: impl Fn(TemplateKind) -> Result<(String, String)>,
    ) -> Result<Templates> {
        let mut parsed = BTreeMap::new();
        for kind in TemplateKind::ALL {
            let (order, roles) = source(kind)?;
            parsed.insert(kind, GadgetTemplate::parse(kind, &order, &roles)?);
        }
        let mut take = |k| parsed.remove(&k).expect("parsed every kind");
        let mut t = Templates {
            frame: take(TemplateKind::Frame),
            cp: take(TemplateKind::Cp),
            s: take(TemplateKind::S),
            sc: take(TemplateKind::SC),
            sv: take(TemplateKind::SV),
            sh: take(TemplateKind::SH),
            suite: Vec::new(),
        };
        t.suite = t.run_suite();
        if let Some(bad) = t.suite.iter().find(|c| !c.passed) {
            let name = bad.name.split(':').next().unwrap_or("").to_owned();
            return Err(Error::TemplateInvalid {
                name,
                check: format!("{}: {}", bad.name, bad.detail),
            });
        }
        Ok(t)
    }

    pub fn get(&self, kind: TemplateKind) -> &GadgetTemplate {
        match kind {
            TemplateKind::S => &self.s,
            TemplateKind::SC => &self.sc,
            TemplateKind::SV => &self.sv,
            TemplateKind::SH => &self.sh,
            TemplateKind::Cp => &self.cp,
            TemplateKind::Frame => &self.frame,
        }
    }

    pub fn s(&self) -> &GadgetTemplate {
        &self.s
    }

    /// Every load-time check, all passed.
    pub fn suite(&self) -> &[Check] {
        &self.suite
    }

    fn run_suite(&self) -> Vec<Check> {
        let mut out = Vec::new();
        out.extend(chain_checks(&self.cp));
        out.extend(frame_checks(&self.frame));
        out.extend(gadget_checks(&self.s));
        for kind in [TemplateKind::SC, TemplateKind::SV, TemplateKind::SH] {
            out.extend(amalgam_checks(&self.s, self.get(kind)));
        }
        out
    }
}

fn chain_checks(cp: &GadgetTemplate) -> Vec<Check> {
    let l = cp.lattice();
    let chain = l.len() == 4
        && l.poset().lt(cp.at("o"), cp.at("a_p"))
        && l.poset().lt(cp.at("a_p"), cp.at("b_p"))
        && l.poset().lt(cp.at("b_p"), cp.at("i"));
    vec![Check::new(
        "Cp:four-element chain",
        chain,
        format!("{} elements", l.len()),
    )]
}

fn complementary(l: &FiniteLattice, x: usize, y: usize) -> bool {
    l.join(x, y) == l.top() && l.meet(x, y) == l.bottom()
}

fn frame_checks(fr: &GadgetTemplate) -> Vec<Check> {
    let l = fr.lattice();
    let chains =
        l.poset().lt(fr.at("a_p"), fr.at("b_p")) && l.poset().lt(fr.at("a_q"), fr.at("b_q"));
    let groups: [&[&str]; 4] = [&["a_0"], &["a_1"], &["a_p", "b_p"], &["a_q", "b_q"]];
    let mut cross = true;
    for (g, xs) in groups.iter().enumerate() {
        for ys in &groups[g + 1..] {
            for x in xs.iter() {
                for y in ys.iter() {
                    cross &= complementary(l, fr.at(x), fr.at(y));
                }
            }
        }
    }
    vec![
        Check::new("frame:anchor chains", chains, ""),
        Check::new("frame:distinct anchors complementary", cross, ""),
    ]
}

/// Load-time checks for the gadget `S`.
fn gadget_checks(s: &GadgetTemplate) -> Vec<Check> {
    let l = s.lattice();
    let mut out = Vec::new();
    let slice: Vec<usize> = ["o", "a_p", "b_p", "a_q", "b_q", "i"]
        .iter()
        .map(|r| s.at(r))
        .collect();
    let frame_ok = l.is_01_sublattice(&slice)
        && l.poset().lt(s.at("a_p"), s.at("b_p"))
        && l.poset().lt(s.at("a_q"), s.at("b_q"))
        && ["a_p", "b_p"].iter().all(|x| {
            ["a_q", "b_q"]
                .iter()
                .all(|y| complementary(l, s.at(x), s.at(y)))
        });
    out.push(Check::new(
        "S:frame slice is a complementary sublattice",
        frame_ok,
        "",
    ));

    let alpha = principal_congruence(l, s.at("a_p"), s.at("b_p"));
    let beta = principal_congruence(l, s.at("a_q"), s.at("b_q"));
    let con = all_congruences(l);
    let icons: Vec<_> = con
        .congruences()
        .iter()
        .filter(|c| is_i_congruence(l, c))
        .collect();
    let two = icons.len() == 2 && icons.contains(&&alpha) && icons.contains(&&beta);
    out.push(Check::new(
        "S:exactly two I-congruences",
        two,
        format!("{} found", icons.len()),
    ));
    out.push(Check::new(
        "S:con(a_p,b_p) < con(a_q,b_q)",
        alpha.refines(&beta) && alpha != beta,
        "",
    ));
    let de = principal_congruence(l, s.at("d"), s.at("e"));
    out.push(Check::new("S:con(d,e) = con(a_p,b_p)", de == alpha, ""));
    let bg = principal_congruence(l, s.at("b_p"), s.at("g"));
    out.push(Check::new(
        "S:c ≡ o under con(b_p,g)",
        bg.related(s.at("c"), s.at("o")),
        "",
    ));
    let quotient_ok = l
        .quotient(&beta)
        .map(|q| lattice_iso(&q, &FiniteLattice::c2xc3()).is_some())
        .unwrap_or(false);
    out.push(Check::new(
        "S:quotient by con(a_q,b_q) is C2×C3",
        quotient_ok,
        "",
    ));
    let mut stray = None;
    for e in l.prime_intervals() {
        let c = principal_congruence(l, e.lower, e.upper);
        if is_i_congruence(l, &c) && c != alpha && c != beta {
            stray = Some(format!("[{}, {}]", l.name(e.lower), l.name(e.upper)));
            break;
        }
    }
    out.push(Check::new(
        "S:prime intervals generate no other I-congruence",
        stray.is_none(),
        stray.unwrap_or_default(),
    ));
    out
}

/// Both `S` copies inside an amalgam are `{o,i}`-sublattices isomorphic to `S`
/// under the role renaming, and together they cover the amalgam.
fn amalgam_checks(s: &GadgetTemplate, am: &GadgetTemplate) -> Vec<Check> {
    let kind = am.kind();
    let l = am.lattice();
    let first: Vec<usize> = (0..s.len()).map(|x| am.at(s.role(x))).collect();
    let second: Vec<usize> = (0..s.len())
        .map(|x| am.at(&kind.second_copy(s.role(x))))
        .collect();
    let mut out = Vec::new();
    for (label, emb) in [("first", &first), ("second", &second)] {
        let ok = embeds(s.lattice(), l, emb);
        out.push(Check::new(
            &format!("{kind}:{label} S copy is a sublattice"),
            ok,
            "",
        ));
    }
    let mut covered = vec![false; l.len()];
    for &x in first.iter().chain(&second) {
        covered[x] = true;
    }
    out.push(Check::new(
        &format!("{kind}:union of the two copies"),
        covered.iter().all(|&c| c) && l.len() == 18,
        format!("{} elements", l.len()),
    ));
    out
}

/// `emb` is a join- and meet-preserving injection of `small` into `big`.
pub(crate) fn embeds(small: &FiniteLattice, big: &FiniteLattice, emb: &[usize]) -> bool {
    let n = small.len();
    let mut seen = BTreeSet::new();
    if !emb.iter().all(|&x| seen.insert(x)) {
        return false;
    }
    (0..n).all(|x| {
        (0..n).all(|y| {
            big.join(emb[x], emb[y]) == emb[small.join(x, y)]
                && big.meet(emb[x], emb[y]) == emb[small.meet(x, y)]
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads() {
        let t = Templates::builtin().unwrap();
        assert_eq!(t.s().len(), 11);
        assert_eq!(t.get(TemplateKind::Cp).lattice().length(), 3);
        for k in [TemplateKind::SC, TemplateKind::SV, TemplateKind::SH] {
            assert_eq!(t.get(k).len(), 18);
        }
        assert!(t.suite().iter().all(|c| c.passed));
    }

    #[test]
    fn second_copy_roles() {
        assert_eq!(TemplateKind::SC.second_copy("a_p"), "a_q");
        assert_eq!(TemplateKind::SV.second_copy("b_p"), "b_p");
        assert_eq!(TemplateKind::SH.second_copy("a_p"), "a_p'");
        assert_eq!(TemplateKind::SH.second_copy("g"), "g'");
        assert_eq!(TemplateKind::SC.second_copy("o"), "o");
    }

    #[test]
    fn broken_role_map_is_rejected() {
        let (_, order, _) = BUILTIN[2];
        let err = GadgetTemplate::parse(TemplateKind::S, order, r#"{"o": "o"}"#).unwrap_err();
        assert!(matches!(err, Error::TemplateInvalid { .. }));
    }

    #[test]
    fn non_lattice_is_rejected() {
        let order =
            r#"{"name": "S", "elements": ["o", "x", "y"], "covers": [["o", "x"], ["o", "y"]]}"#;
        let err = GadgetTemplate::parse(TemplateKind::Cp, order, "{}").unwrap_err();
        match err {
            Error::TemplateInvalid { name, check } => {
                assert_eq!(name, "Cp");
                assert!(check.starts_with("lattice"));
            }
            other => panic!("{other:?}"),
        }
    }
}
