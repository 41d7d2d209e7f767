//! End-to-end check that `Princ K ≅ P`, stage by stage.

use std::fmt::Write as _;

use super::{assemble_k, base, beta_h, phi, Construction, Templates};
use crate::congruence::{all_congruences, is_i_congruence, princ_order, principal_congruence};
use crate::error::{Error, Result};
use crate::lattice::{lattice_iso, FiniteLattice};
use crate::order::{order_iso, BoundedPoset, DownSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The outcome of [`verify_theorem`]. Stages after a failed assembly are
/// not run.
#[derive(Clone, Debug)]
pub struct Report {
    pub stages: Vec<Stage>,
    pub p_size: usize,
    pub k_size: usize,
    pub length: usize,
    pub con_count: usize,
    pub princ_count: usize,
    pub down_set_count: usize,
    construction: Option<Construction>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| !s.passed)
    }

    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    /// `Ok` iff every stage passed.
    pub fn ensure(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(s) => Err(Error::VerificationFailed {
                stage: s.name.to_owned(),
                witness: s.detail.clone(),
            }),
        }
    }

    /// Plain-text rendering, one line per stage.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "|P| = {}  |K| = {}  length(K) = {}  |Con K| = {}  |Princ K| = {}  |Down⁻P| = {}",
            self.p_size,
            self.k_size,
            self.length,
            self.con_count,
            self.princ_count,
            self.down_set_count
        );
        for st in &self.stages {
            let mark = if st.passed { "pass" } else { "FAIL" };
            if st.detail.is_empty() {
                let _ = writeln!(s, "  [{mark}] {}", st.name);
            } else {
                let _ = writeln!(s, "  [{mark}] {}: {}", st.name, st.detail);
            }
        }
        s
    }
}

fn stage(name: &'static str, result: std::result::Result<String, String>) -> Stage {
    match result {
        Ok(detail) => Stage {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Stage {
            name,
            passed: false,
            detail,
        },
    }
}

/// Assembles `K` for `P` and checks, in order: lattice-hood, the
/// `M3`-sublattices through every element, that every congruence is `0`,
/// `1` or an I-congruence, the anchor congruences, `Base` and `β_H`, the
/// correspondence `φ`, and finally `Princ K ≅ P`.
pub fn verify_theorem(p: &BoundedPoset, templates: &Templates) -> Report {
    let mut report = Report {
        stages: Vec::new(),
        p_size: p.len(),
        k_size: 0,
        length: 0,
        con_count: 0,
        princ_count: 0,
        down_set_count: p.poset().down_sets(true).len(),
        construction: None,
    };
    let k = match assemble_k(p, templates) {
        Ok(k) => k,
        Err(e) => {
            report.stages.push(stage("assembly", Err(e.to_string())));
            return report;
        }
    };
    let l = k.lattice();
    report.k_size = l.len();
    report.length = l.length();
    report.stages.push(stage(
        "assembly",
        Ok(format!("{} gadget instances", k.instances().len())),
    ));

    if !k.is_degenerate() {
        report
            .stages
            .push(stage("m3-sublattices", m3_everywhere(&k)));
        let con = all_congruences(l);
        report.con_count = con.len();
        let stray = con
            .congruences()
            .iter()
            .find(|c| !c.is_zero() && !c.is_one() && !is_i_congruence(l, c));
        report.stages.push(stage(
            "congruences-are-0-1-or-isolating",
            match stray {
                None => Ok(format!("{} congruences", con.len())),
                Some(c) => Err(format!("{:?}", c.nontrivial_named_blocks(l))),
            },
        ));
        report
            .stages
            .push(stage("anchor-congruences", anchor_congruences(&k)));
        report.stages.push(stage(
            "base-is-down-set",
            con.congruences()
                .iter()
                .filter(|c| is_i_congruence(l, c))
                .try_for_each(|c| {
                    let b = base(&k, c).map_err(|e| e.to_string())?;
                    let sub = p.poset();
                    for &x in &b {
                        if let Some(y) = p
                            .interior()
                            .iter()
                            .find(|&&y| sub.lt(y, x) && !b.contains(&y))
                        {
                            return Err(format!(
                                "{} in Base but {} is not",
                                sub.name(x),
                                sub.name(*y)
                            ));
                        }
                    }
                    Ok(())
                })
                .map(|_| String::new()),
        ));
        report
            .stages
            .push(stage("beta-h", beta_h_all(&k, templates, &con)));
    } else {
        let chain = l.len() == p.len() && l.poset().covers().len() + 1 == l.len();
        report.stages.push(stage(
            "degenerate-chain",
            if chain {
                Ok(format!("{}-element chain", l.len()))
            } else {
                Err("not a chain".into())
            },
        ));
        report.con_count = all_congruences(l).len();
    }

    let princ = princ_order(l);
    report.princ_count = princ.len();
    if !k.is_degenerate() {
        let result = phi(&k, templates).map_err(|e| e.to_string());
        let principal_ok = result.as_ref().map_err(|e| e.clone()).and_then(|corr| {
            let mut got: Vec<DownSet> = princ
                .congruences()
                .iter()
                .map(|c| {
                    corr.forward(c)
                        .cloned()
                        .ok_or_else(|| "principal congruence missing from Con K".to_string())
                })
                .collect::<std::result::Result<_, _>>()?;
            got.sort();
            let mut want: Vec<DownSet> = (0..p.len())
                .map(|x| p.poset().principal_down_set(x))
                .collect();
            want.sort();
            if got == want {
                Ok(String::new())
            } else {
                Err("φ does not map Princ K onto the principal down sets".into())
            }
        });
        report.stages.push(stage(
            "correspondence",
            result.map(|c| format!("{} pairs", c.len())),
        ));
        report
            .stages
            .push(stage("principal-correspondence", principal_ok));
    }
    let iso = order_iso(p.poset(), &princ.to_poset(l));
    report.stages.push(stage(
        "princ-iso",
        match iso {
            Some(_) => Ok(String::new()),
            None => Err(format!(
                "Princ K has {} elements, P has {}",
                princ.len(),
                p.len()
            )),
        },
    ));
    report.construction = Some(k);
    report
}

/// Every `x ∈ K⁻` lies in an `{o,i}`-sublattice isomorphic to `M3`.
fn m3_everywhere(k: &Construction) -> std::result::Result<String, String> {
    let l = k.lattice();
    let m3 = FiniteLattice::m3();
    let (o, i) = (l.bottom(), l.top());
    let (a0, a1) = (k.anchor(k.source().zero()).0, k.anchor(k.source().one()).0);
    let some_p = k.anchor(k.source().interior()[0]).0;
    let is_m3 = |x: usize, y: usize, z: usize| {
        let set = [o, x, y, z, i];
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() == 5
            && l.is_01_sublattice(&set)
            && l.sublattice(&set)
                .map(|sub| lattice_iso(&sub, &m3).is_some())
                .unwrap_or(false)
    };
    for x in 0..l.len() {
        if x == o || x == i {
            continue;
        }
        let found = if x == a0 || x == a1 {
            is_m3(some_p, a0, a1)
        } else {
            is_m3(x, a0, a1)
        } || (0..l.len()).any(|y| (y + 1..l.len()).any(|z| is_m3(x, y, z)));
        if !found {
            return Err(format!("no M3 through {}", l.name(x)));
        }
    }
    Ok(String::new())
}

/// For each `p ∈ P⁻`: `con(a_p, b_p)` is an I-congruence with
/// `Base = ↓p ∩ P⁻`.
fn anchor_congruences(k: &Construction) -> std::result::Result<String, String> {
    let src = k.source();
    let l = k.lattice();
    for &p in src.interior() {
        let (a, b) = k.anchor(p);
        let c = principal_congruence(l, a, b);
        let got = base(k, &c).map_err(|_| {
            format!(
                "con(a_{0}, b_{0}) is not an I-congruence",
                src.poset().name(p)
            )
        })?;
        let want: Vec<usize> = src
            .interior()
            .iter()
            .copied()
            .filter(|&q| src.poset().leq(q, p))
            .collect();
        if got != want {
            return Err(format!(
                "Base(con(a_{0}, b_{0})) ≠ ↓{0}",
                src.poset().name(p)
            ));
        }
    }
    Ok(String::new())
}

/// `β_H` is a congruence of `K` for every down set `H` of `P⁻`, and
/// `H ↦ β_H` is injective and order preserving.
fn beta_h_all(
    k: &Construction,
    templates: &Templates,
    con: &crate::congruence::ConOrder,
) -> std::result::Result<String, String> {
    let src = k.source();
    let l = k.lattice();
    let hs = src.interior_down_sets();
    let mut betas = Vec::with_capacity(hs.len());
    for h in &hs {
        let members: Vec<usize> = h.iter().collect();
        let beta = beta_h(k, templates, &members)
            .map_err(|e| format!("H = {:?}: {e}", h.names(src.poset())))?;
        if !con.contains(&beta) {
            return Err(format!(
                "β_H for {:?} is not in Con K",
                h.names(src.poset())
            ));
        }
        if h.is_empty() != beta.is_zero() {
            return Err("β_∅ must be the zero congruence and only it".into());
        }
        if !h.is_empty() && !is_i_congruence(l, &beta) {
            return Err(format!(
                "β_H for {:?} is not an I-congruence",
                h.names(src.poset())
            ));
        }
        betas.push(beta);
    }
    for (x, hx) in hs.iter().enumerate() {
        for (y, hy) in hs.iter().enumerate() {
            if x != y && betas[x] == betas[y] {
                return Err("H ↦ β_H is not injective".into());
            }
            if hx.is_subset(hy) && !betas[x].refines(&betas[y]) {
                return Err("H ↦ β_H is not order preserving".into());
            }
        }
    }
    Ok(format!("{} down sets", hs.len()))
}
