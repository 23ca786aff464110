// SPDX-License-Identifier: Apache-2.0

//! Walk distributions over the vertex set.
//!
//! Every active vertex `i` is embedded as `w_i`, the average of its `t`-step
//! random-walk distributions for `t = 1..=L`. Distributions are kept sparse;
//! the support of `w_i` is exactly the set of vertices reachable from `i` by
//! a walk of length between 1 and `L`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{DerError, Result};
use crate::graph::Graph;

/// Nonnegative measure stored as `(vertex, mass)` pairs with positive mass,
/// sorted by vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMeasure {
    entries: Vec<(usize, f64)>,
}

impl SparseMeasure {
    /// Sorts the pairs, merges repeated vertices and drops non-positive mass.
    pub fn new(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (v, m) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => merged.push((v, m)),
            }
        }
        merged.retain(|&(_, m)| m > 0.0);
        Self { entries: merged }
    }

    pub fn point(v: usize) -> Self {
        Self { entries: vec![(v, 1.0)] }
    }

    pub fn from_dense(masses: &[f64]) -> Self {
        Self {
            entries: masses
                .iter()
                .enumerate()
                .filter(|&(_, &m)| m > 0.0)
                .map(|(v, &m)| (v, m))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, v: usize) -> f64 {
        self.entries
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(v, m) in &self.entries {
            out[v] = m;
        }
        out
    }
}

/// Log-likelihood score `D(nu, mu) = sum_i nu(i) ln mu(i)`.
///
/// Returns negative infinity when `nu` charges a vertex that `mu` does not.
pub fn score(nu: &SparseMeasure, mu: &SparseMeasure) -> f64 {
    let mut total = 0.0;
    let mut cursor = mu.entries.iter().peekable();
    for &(v, m) in &nu.entries {
        while cursor.next_if(|&&(u, _)| u < v).is_some() {}
        match cursor.peek() {
            Some(&&(u, mass)) if u == v => total += m * mass.ln(),
            _ => return f64::NEG_INFINITY,
        }
    }
    total
}

/// Score of a sparse measure against a table of `ln mu(v)` values.
pub(crate) fn score_dense_log(nu: &SparseMeasure, log_mu: &[f64]) -> f64 {
    let mut total = 0.0;
    for &(v, m) in &nu.entries {
        let l = log_mu[v];
        if l == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        total += m * l;
    }
    total
}

/// Row `i` of the transition matrix `T = D^-1 A`.
pub fn transition_row(g: &Graph, i: usize) -> Result<SparseMeasure> {
    let d = g.degree(i);
    if d <= 0.0 {
        return Err(DerError::IsolatedVertex(i));
    }
    Ok(SparseMeasure {
        entries: g.neighbors(i).iter().map(|&(j, w)| (j, w / d)).collect(),
    })
}

/// The walk measures `w_i` of every active vertex for a fixed walk length.
#[derive(Debug, Clone)]
pub struct DiffusionSet {
    walk_length: usize,
    vertices: Vec<usize>,
    position: Vec<Option<usize>>,
    measures: Vec<SparseMeasure>,
}

impl DiffusionSet {
    pub fn walk_length(&self) -> usize {
        self.walk_length
    }

    /// Active vertices, ascending. Positions into this list index
    /// [`DiffusionSet::measure_at`] and every [`crate::der::Partition`].
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.position.get(v).copied().flatten()
    }

    pub fn measure(&self, v: usize) -> Option<&SparseMeasure> {
        self.position(v).map(|p| &self.measures[p])
    }

    pub fn measure_at(&self, pos: usize) -> &SparseMeasure {
        &self.measures[pos]
    }

    /// Total number of stored `(vertex, mass)` pairs.
    pub fn stored_entries(&self) -> usize {
        self.measures.iter().map(SparseMeasure::support_len).sum()
    }

    /// `i j mass` triples, one per stored entry, using external ids.
    pub fn dump(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (&i, w) in self.vertices.iter().zip(&self.measures) {
            for &(j, m) in w.entries() {
                let _ = writeln!(out, "{} {} {}", g.id(i), g.id(j), m);
            }
        }
        out
    }
}

/// Dense scratch vector that remembers which slots were written.
struct Accumulator {
    values: Vec<f64>,
    touched: Vec<usize>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Self { values: vec![0.0; n], touched: Vec::new() }
    }

    #[inline]
    fn add(&mut self, v: usize, m: f64) {
        if self.values[v] == 0.0 {
            self.touched.push(v);
        }
        self.values[v] += m;
    }

    /// Emits the touched slots in vertex order, scaled, and resets them.
    fn drain_sorted(&mut self, scale: f64) -> Vec<(usize, f64)> {
        self.touched.sort_unstable();
        let out = self
            .touched
            .iter()
            .map(|&v| (v, self.values[v] * scale))
            .collect();
        for &v in &self.touched {
            self.values[v] = 0.0;
        }
        self.touched.clear();
        out
    }
}

fn walk_measure(g: &Graph, start: usize, walk_length: usize, step: &mut Accumulator, sum: &mut Accumulator) -> SparseMeasure {
    let mut current = vec![(start, 1.0)];
    for _ in 0..walk_length {
        for &(j, m) in &current {
            let scale = m / g.degree(j);
            for &(v, w) in g.neighbors(j) {
                step.add(v, scale * w);
            }
        }
        current = step.drain_sorted(1.0);
        for &(v, m) in &current {
            sum.add(v, m);
        }
    }
    SparseMeasure {
        entries: sum.drain_sorted(1.0 / walk_length as f64),
    }
}

/// Computes `w_i = (1/L) (w_i^1 + ... + w_i^L)` for every active vertex by
/// repeated sparse vector-operator products.
pub fn walk_measures(g: &Graph, walk_length: usize) -> Result<DiffusionSet> {
    if walk_length == 0 {
        return Err(DerError::InvalidParameter("walk length must be at least 1".into()));
    }
    let vertices = g.active_vertices();
    let n = g.n();
    let measures: Vec<SparseMeasure> = vertices
        .par_iter()
        .map_init(
            || (Accumulator::new(n), Accumulator::new(n)),
            |(step, sum), &i| walk_measure(g, i, walk_length, step, sum),
        )
        .collect();
    let mut position = vec![None; n];
    for (p, &v) in vertices.iter().enumerate() {
        position[v] = Some(p);
    }
    Ok(DiffusionSet { walk_length, vertices, position, measures })
}

/// Degree-weighted average of walk measures over positions of `ds`, dense.
pub(crate) fn cluster_measure_dense(g: &Graph, ds: &DiffusionSet, positions: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; g.n()];
    let mut mass = 0.0;
    for &p in positions {
        let d = g.degree(ds.vertices[p]);
        mass += d;
        for &(v, m) in ds.measures[p].entries() {
            out[v] += d * m;
        }
    }
    if mass > 0.0 {
        for x in &mut out {
            *x /= mass;
        }
    }
    out
}

/// `mu_S = (1/d_S) sum_{i in S} d_i w_i` for a set of graph vertices.
pub fn cluster_measure(g: &Graph, ds: &DiffusionSet, members: &[usize]) -> Result<SparseMeasure> {
    if members.is_empty() {
        return Err(DerError::EmptyCluster);
    }
    let positions = members
        .iter()
        .map(|&v| {
            ds.position(v)
                .ok_or_else(|| DerError::InvalidInput(format!("vertex {v} is not active")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMeasure::from_dense(&cluster_measure_dense(g, ds, &positions)))
}
