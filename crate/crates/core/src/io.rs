//! JSON files for posets, lattices and congruences.
//!
//! A poset file is `{"name", "elements", "covers"}` with covers written as
//! `[lower, upper]`. Lattice files use the same shape; join and meet are
//! recomputed on load. Lattices produced by the construction carry an extra
//! `anchors` object mapping each element `p` of `P` to `[a_p, b_p]`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::order::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<BTreeMap<String, (String, String)>>,
}

impl PosetFile {
    pub fn from_poset(name: &str, poset: &Poset) -> PosetFile {
        PosetFile {
            name: name.to_owned(),
            elements: poset.names().to_vec(),
            covers: poset
                .covers()
                .into_iter()
                .map(|(x, y)| (poset.name(x).to_owned(), poset.name(y).to_owned()))
                .collect(),
            anchors: None,
        }
    }

    pub fn parse(text: &str) -> Result<PosetFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<PosetFile> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        PosetFile::parse(&text)
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Poset::from_covers(&self.elements, &self.covers)
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        FiniteLattice::from_poset(self.to_poset()?)
    }

    /// Pretty JSON with a trailing newline; one cover per line.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        s.push_str(&format!("  \"name\": {},\n", quote(&self.name)));
        let els: Vec<String> = self.elements.iter().map(|e| quote(e)).collect();
        s.push_str(&format!("  \"elements\": [{}],\n", els.join(", ")));
        s.push_str("  \"covers\": [");
        if self.covers.is_empty() {
            s.push(']');
        } else {
            s.push('\n');
            let lines: Vec<String> = self
                .covers
                .iter()
                .map(|(a, b)| format!("    [{}, {}]", quote(a), quote(b)))
                .collect();
            s.push_str(&lines.join(",\n"));
            s.push_str("\n  ]");
        }
        if let Some(anchors) = &self.anchors {
            s.push_str(",\n  \"anchors\": {");
            if anchors.is_empty() {
                s.push('}');
            } else {
                s.push('\n');
                let lines: Vec<String> = anchors
                    .iter()
                    .map(|(p, (a, b))| format!("    {}: [{}, {}]", quote(p), quote(a), quote(b)))
                    .collect();
                s.push_str(&lines.join(",\n"));
                s.push_str("\n  }");
            }
        }
        s.push_str("\n}\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Reads a poset file.
pub fn read_poset(path: &Path) -> Result<Poset> {
    PosetFile::read(path)?.to_poset()
}

/// Reads a lattice file; anchors, if present, are ignored.
pub fn read_lattice(path: &Path) -> Result<FiniteLattice> {
    PosetFile::read(path)?.to_lattice()
}

/// A list of congruences as JSON: each congruence is a list of blocks, each
/// block a sorted list of names.
pub fn congruences_to_json(lat: &FiniteLattice, cons: &[Congruence]) -> String {
    let mut s = String::from("[\n");
    let items: Vec<String> = cons
        .iter()
        .map(|c| format!("  {}", blocks_json(lat, c)))
        .collect();
    s.push_str(&items.join(",\n"));
    s.push_str("\n]\n");
    s
}

/// One congruence as a single-line JSON array of blocks.
pub fn blocks_json(lat: &FiniteLattice, c: &Congruence) -> String {
    let blocks: Vec<String> = c
        .named_blocks(lat)
        .iter()
        .map(|b| {
            format!(
                "[{}]",
                b.iter().map(|x| quote(x)).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    format!("[{}]", blocks.join(", "))
}
