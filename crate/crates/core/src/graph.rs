// SPDX-License-Identifier: Apache-2.0

//! Undirected weighted graphs, edge-list ingestion and the stationary measure
//! of the simple random walk.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{DerError, Result};

/// Immutable undirected weighted graph.
///
/// Adjacency lists are sorted by neighbor index. A self-loop `(i, i, w)` is
/// stored once in the list of `i` and contributes `w` to its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    total_degree: f64,
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

/// `pi[i] = d_i / d_V`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryMeasure {
    pub pi: Vec<f64>,
}

impl StationaryMeasure {
    /// Total mass of a vertex set.
    pub fn mass(&self, vertices: &[usize]) -> f64 {
        vertices.iter().map(|&v| self.pi[v]).sum()
    }
}

/// Incremental constructor. Vertices are numbered in first-seen order.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder with vertices `"0".."n-1"` already registered.
    pub fn with_numbered_vertices(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.add_vertex(&i.to_string());
        }
        b
    }

    pub fn add_vertex(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    /// Adds weight to the edge between two internal indices. Duplicate edges
    /// accumulate; non-positive weights are ignored.
    pub fn add_edge_by_index(&mut self, u: usize, v: usize, weight: f64) {
        assert!(u < self.ids.len() && v < self.ids.len(), "vertex index out of range");
        if weight <= 0.0 {
            return;
        }
        let key = if u <= v { (u, v) } else { (v, u) };
        *self.edges.entry(key).or_insert(0.0) += weight;
    }

    pub fn add_edge(&mut self, u: &str, v: &str, weight: f64) {
        let ui = self.add_vertex(u);
        let vi = self.add_vertex(v);
        self.add_edge_by_index(ui, vi, weight);
    }

    pub fn build(self) -> Graph {
        let n = self.ids.len();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(u, v), &w) in &self.edges {
            adjacency[u].push((v, w));
            if u != v {
                adjacency[v].push((u, w));
            }
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(j, _)| j);
        }
        let degrees: Vec<f64> = adjacency
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect();
        let total_degree = degrees.iter().sum();
        Graph {
            adjacency,
            degrees,
            total_degree,
            ids: self.ids,
            index: self.index,
        }
    }
}

impl Graph {
    /// Parses a whitespace-separated edge list: `u v` or `u v w` per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut builder = GraphBuilder::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| DerError::Parse {
                line: lineno + 1,
                message,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let weight = match tokens.len() {
                2 => 1.0,
                3 => {
                    let w: f64 = tokens[2]
                        .parse()
                        .map_err(|_| parse_err(format!("weight {:?} is not a number", tokens[2])))?;
                    if !w.is_finite() || w <= 0.0 {
                        return Err(parse_err(format!("weight {w} must be positive and finite")));
                    }
                    w
                }
                c => return Err(parse_err(format!("expected 2 or 3 fields, found {c}"))),
            };
            builder.add_edge(tokens[0], tokens[1], weight);
        }
        Ok(builder.build())
    }

    /// Serializes every stored edge once as `u v w`, ordered by internal
    /// index. Isolated vertices are not represented.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, row) in self.adjacency.iter().enumerate() {
            for &(v, w) in row.iter().filter(|&&(v, _)| v >= u) {
                let _ = writeln!(out, "{} {} {}", self.ids[u], self.ids[v], w);
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of distinct undirected edges, self-loops included.
    pub fn num_edges(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(u, row)| row.iter().filter(|&&(v, _)| v >= u).count())
            .sum()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_degree(&self) -> f64 {
        self.total_degree
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(v, _)| v)
            .map(|pos| self.adjacency[i][pos].1)
            .unwrap_or(0.0)
    }

    /// True when every stored weight equals one.
    pub fn is_unweighted(&self) -> bool {
        self.adjacency.iter().flatten().all(|&(_, w)| w == 1.0)
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn stationary(&self) -> Result<StationaryMeasure> {
        if self.total_degree <= 0.0 {
            return Err(DerError::DegenerateGraph);
        }
        Ok(StationaryMeasure {
            pi: self.degrees.iter().map(|d| d / self.total_degree).collect(),
        })
    }

    /// Vertices with positive degree, ascending.
    pub fn active_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.degrees[i] > 0.0).collect()
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Graph {
        assert!(factor > 0.0);
        let adjacency: Vec<Vec<(usize, f64)>> = self
            .adjacency
            .iter()
            .map(|row| row.iter().map(|&(j, w)| (j, w * factor)).collect())
            .collect();
        let degrees: Vec<f64> = adjacency
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect();
        Graph {
            total_degree: degrees.iter().sum(),
            adjacency,
            degrees,
            ids: self.ids.clone(),
            index: self.index.clone(),
        }
    }
}
