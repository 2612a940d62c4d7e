//! Graphviz export of relation graphs.

use std::fmt::Write as _;

use crate::relation::RelationGraph;

/// A DOT digraph whose nodes are slex positions. A comment block maps each
/// position to its family; a pair of opposite edges is drawn once with
/// `dir=both`.
pub fn export_dot(g: &RelationGraph, title: &str) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "// {title}");
    let _ = writeln!(o, "// legend");
    for (i, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(o, "//   {} -> {{{}}}", i + 1, v.legend());
    }
    let _ = writeln!(o, "digraph relation {{");
    for i in 0..g.len() {
        let _ = writeln!(o, "  {};", i + 1);
    }
    let a = g.adjacency();
    for s in 0..g.len() {
        for t in 0..g.len() {
            if !a[s][t] {
                continue;
            }
            if a[t][s] {
                if s < t {
                    let _ = writeln!(o, "  {} -> {} [dir=both];", s + 1, t + 1);
                }
            } else {
                let _ = writeln!(o, "  {} -> {};", s + 1, t + 1);
            }
        }
    }
    o.push_str("}\n");
    o
}

/// Positions and legends read back from a DOT comment block.
pub fn parse_legend(dot: &str) -> Vec<(usize, String)> {
    dot.lines()
        .filter_map(|l| l.strip_prefix("//   "))
        .filter_map(|l| {
            let (n, rest) = l.split_once(" -> ")?;
            Some((
                n.trim().parse().ok()?,
                rest.trim()
                    .trim_start_matches('{')
                    .trim_end_matches('}')
                    .to_string(),
            ))
        })
        .collect()
}

/// Edge lines as `(source, target, mutual)`.
pub fn parse_edges(dot: &str) -> Vec<(usize, usize, bool)> {
    dot.lines()
        .filter(|l| !l.trim_start().starts_with("//"))
        .filter_map(|l| {
            let l = l.trim().trim_end_matches(';');
            let (lhs, rhs) = l.split_once(" -> ")?;
            let (t, attrs) = rhs.split_once(' ').unwrap_or((rhs, ""));
            Some((
                lhs.trim().parse().ok()?,
                t.trim().parse().ok()?,
                attrs.contains("dir=both"),
            ))
        })
        .collect()
}
