// SPDX-License-Identifier: Apache-2.0

//! Text formats for partitions, covers and co-occurrence counts.
//!
//! * partition: `external_id<TAB>cluster` per vertex
//! * cover: `external_id<TAB>c1,c2,...` per vertex, ascending indices
//! * co-occurrence: `id_i id_j count` per stored pair, `i < j` by internal index

use std::fmt::Write as _;

use crate::ensemble::CoOccurrence;
use crate::error::{DerError, Result};
use crate::graph::Graph;

/// One line per graph vertex in index order.
pub fn format_partition(g: &Graph, labels: &[usize]) -> String {
    assert_eq!(labels.len(), g.n());
    let mut out = String::new();
    for (v, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", g.id(v), l);
    }
    out
}

/// `memberships[v]` lists the communities of graph vertex `v`.
pub fn format_cover(g: &Graph, memberships: &[Vec<usize>]) -> String {
    assert_eq!(memberships.len(), g.n());
    let mut out = String::new();
    for (v, ms) in memberships.iter().enumerate() {
        let joined: Vec<String> = ms.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}\t{}", g.id(v), joined.join(","));
    }
    out
}

/// `vertices[i]` maps co-occurrence item `i` to its graph vertex.
pub fn format_cooccurrence(g: &Graph, vertices: &[usize], co: &CoOccurrence) -> String {
    let mut out = String::new();
    for (i, j, c) in co.pairs() {
        let _ = writeln!(out, "{} {} {}", g.id(vertices[i]), g.id(vertices[j]), c);
    }
    out
}

/// Reads `id label` pairs (tab or space separated). Blank lines and `#`
/// comments are skipped; ids must be unique.
pub fn parse_labeled(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(DerError::Parse {
                line: lineno + 1,
                message: format!("expected `id label`, found {} fields", fields.len()),
            });
        }
        if !seen.insert(fields[0].to_string()) {
            return Err(DerError::Parse {
                line: lineno + 1,
                message: format!("vertex {} listed twice", fields[0]),
            });
        }
        out.push((fields[0].to_string(), fields[1].to_string()));
    }
    Ok(out)
}

/// Aligns two labeled files on vertex id and returns dense labels in the
/// order of the first file. Fails unless both cover the same ids.
pub fn align_labels(a: &[(String, String)], b: &[(String, String)]) -> Result<(Vec<usize>, Vec<usize>)> {
    let lookup: std::collections::HashMap<&str, &str> =
        b.iter().map(|(id, l)| (id.as_str(), l.as_str())).collect();
    if a.len() != b.len() {
        return Err(DerError::InvalidInput(format!(
            "vertex sets differ ({} vs {} vertices)",
            a.len(),
            b.len()
        )));
    }
    let mut la = Vec::with_capacity(a.len());
    let mut lb = Vec::with_capacity(a.len());
    for (id, l) in a {
        let other = lookup
            .get(id.as_str())
            .ok_or_else(|| DerError::InvalidInput(format!("vertex {id} missing from second partition")))?;
        la.push(l.as_str());
        lb.push(*other);
    }
    Ok((dense(&la), dense(&lb)))
}

fn dense(labels: &[&str]) -> Vec<usize> {
    crate::der::Partition::from_labels(labels).assignment().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_round_trip() {
        let g = Graph::from_edge_list("x y\ny z").unwrap();
        let text = format_partition(&g, &[0, 0, 1]);
        assert_eq!(text, "x\t0\ny\t0\nz\t1\n");
        let parsed = parse_labeled(&text).unwrap();
        assert_eq!(parsed[2], ("z".to_string(), "1".to_string()));
    }

    #[test]
    fn cover_format() {
        let g = Graph::from_edge_list("x y").unwrap();
        assert_eq!(format_cover(&g, &[vec![0, 1], vec![1]]), "x\t0,1\ny\t1\n");
    }

    #[test]
    fn alignment() {
        let a = parse_labeled("a 1\nb 1\nc 2").unwrap();
        let b = parse_labeled("c red\na blue\nb blue").unwrap();
        assert_eq!(align_labels(&a, &b).unwrap(), (vec![0, 0, 1], vec![0, 0, 1]));
        let short = parse_labeled("a 1\nb 1").unwrap();
        assert!(align_labels(&a, &short).is_err());
        let other = parse_labeled("a 1\nb 1\nd 1").unwrap();
        assert!(align_labels(&a, &other).is_err());
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(parse_labeled("a 1\nb"), Err(DerError::Parse { line: 2, .. })));
        assert!(matches!(parse_labeled("a 1\na 2"), Err(DerError::Parse { line: 2, .. })));
    }
}
