// SPDX-License-Identifier: Apache-2.0

//! Partition comparison: entropy, mutual information, normalized mutual
//! information and the best-matching misclassification count.
//!
//! Every vertex carries weight one. Labels are arbitrary `usize` values and
//! only the grouping they induce matters.

use std::collections::HashMap;

use crate::error::{DerError, Result};

/// Joint cluster counts of two labelings of the same items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    table: Vec<Vec<usize>>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

fn dense_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let dense = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (dense, map.len())
}

impl Contingency {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(DerError::InvalidInput(format!(
                "partitions cover {} and {} items",
                a.len(),
                b.len()
            )));
        }
        let (a, ka) = dense_labels(a);
        let (b, kb) = dense_labels(b);
        let mut table = vec![vec![0; kb]; ka];
        for (&x, &y) in a.iter().zip(&b) {
            table[x][y] += 1;
        }
        let row_sums = table.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
        Ok(Self { table, row_sums, col_sums, total: a.len() })
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn transposed(&self) -> Self {
        let kb = self.col_sums.len();
        let table = (0..kb)
            .map(|j| self.table.iter().map(|r| r[j]).collect())
            .collect();
        Self {
            table,
            row_sums: self.col_sums.clone(),
            col_sums: self.row_sums.clone(),
            total: self.total,
        }
    }
}

/// Sums terms in sorted order so the result does not depend on the order in
/// which they were produced.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn entropy_of_counts(counts: &[usize], total: usize, log: fn(f64) -> f64) -> f64 {
    let n = total as f64;
    -ordered_sum(
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * log(p)
            })
            .collect(),
    )
}

fn mutual_information_of(c: &Contingency, log: fn(f64) -> f64) -> f64 {
    let n = c.total as f64;
    let mut terms = Vec::new();
    for (a, row) in c.table.iter().enumerate() {
        for (b, &nab) in row.iter().enumerate() {
            if nab > 0 {
                let joint = nab as f64;
                let outer = c.row_sums[a] as f64 * c.col_sums[b] as f64;
                terms.push(joint / n * log(n * joint / outer));
            }
        }
    }
    ordered_sum(terms)
}

fn nmi_with(a: &[usize], b: &[usize], log: fn(f64) -> f64) -> Result<f64> {
    let c = Contingency::new(a, b)?;
    if c.total == 0 {
        return Err(DerError::InvalidInput("partitions are empty".into()));
    }
    let ha = entropy_of_counts(&c.row_sums, c.total, log);
    let hb = entropy_of_counts(&c.col_sums, c.total, log);
    if ha + hb == 0.0 {
        // Both partitions are a single cluster.
        return Ok(1.0);
    }
    let i = mutual_information_of(&c, log);
    Ok((2.0 * i / (ha + hb)).clamp(0.0, 1.0))
}

/// Shannon entropy of a labeling, in nats.
pub fn entropy(labels: &[usize]) -> f64 {
    let (dense, k) = dense_labels(labels);
    let mut counts = vec![0; k];
    for l in dense {
        counts[l] += 1;
    }
    entropy_of_counts(&counts, labels.len(), f64::ln)
}

pub fn mutual_information(a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(mutual_information_of(&Contingency::new(a, b)?, f64::ln))
}

/// `2 I(P, Q) / (H(P) + H(Q))`; two single-cluster partitions score 1.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    nmi_with(a, b, f64::ln)
}

/// Items left unmatched by the best one-to-one pairing of clusters.
/// Clusters without a partner count all their items as errors.
pub fn misclassified(a: &[usize], b: &[usize]) -> Result<usize> {
    let c = Contingency::new(a, b)?;
    let c = if c.row_sums.len() <= c.col_sums.len() { c } else { c.transposed() };
    let weights: Vec<Vec<i64>> = c
        .table
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    let matching = max_weight_matching(&weights);
    let matched: usize = matching
        .iter()
        .enumerate()
        .map(|(row, &col)| c.table[row][col])
        .sum();
    Ok(c.total - matched)
}

/// Hungarian algorithm for a rectangular matrix with `rows <= cols`.
/// Returns the column assigned to each row, maximizing the total weight.
pub fn max_weight_matching(weights: &[Vec<i64>]) -> Vec<usize> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    let m = weights[0].len();
    assert!(n <= m, "matching needs rows <= cols");
    let max = weights.iter().flatten().copied().max().unwrap_or(0);
    // Minimize max - w; potentials are 1-indexed with a virtual column 0.
    let cost = |i: usize, j: usize| max - weights[i - 1][j - 1];
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=m {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}
