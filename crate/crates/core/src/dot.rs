//! Graphviz export of Hasse diagrams.

use std::fmt::Write as _;

use crate::order::Poset;

/// A DOT digraph of the cover edges of `poset`, drawn bottom-up with one
/// rank per height (the minimal elements at rank 0). Nodes appear in
/// positional order within each rank.
pub fn to_dot(poset: &Poset, name: &str) -> String {
    let heights = poset.heights();
    let top = heights.iter().copied().max().unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(name));
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [shape=circle];");
    for rank in 0..=top {
        let nodes: Vec<String> = (0..poset.len())
            .filter(|&x| heights[x] == rank)
            .map(|x| quote(poset.name(x)))
            .collect();
        if !nodes.is_empty() {
            let _ = writeln!(
                s,
                "  {{ rank=same; {}; }}  // rank {rank}",
                nodes.join("; ")
            );
        }
    }
    for (x, y) in poset.covers() {
        let _ = writeln!(s, "  {} -> {};", quote(poset.name(x)), quote(poset.name(y)));
    }
    s.push_str("}\n");
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
