// SPDX-License-Identifier: Apache-2.0

//! Repeated runs aggregated through a co-occurrence matrix.
//!
//! Each repeat is an independent restarted run. Pair counts of "same cluster"
//! decisions are then split by a greedy threshold rule at `ceil(R / 2)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::der::{Der, DerConfig, Partition};
use crate::error::{DerError, Result};
use crate::graph::Graph;
use crate::seed::derive_seed;

/// Symmetric pair counts over `n` items and `runs` partitions. The diagonal
/// is implicit (`count(i, i) = runs`) and zero counts are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoOccurrence {
    runs: u32,
    rows: Vec<Vec<(usize, u32)>>,
}

impl CoOccurrence {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn runs(&self) -> u32 {
        self.runs
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return self.runs;
        }
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(v, _)| v)
            .map(|pos| row[pos].1)
            .unwrap_or(0)
    }

    /// Stored neighbors of `i` with their counts, ascending.
    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.rows[i]
    }

    /// `(i, j, count)` for every stored pair with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| j > i)
                .map(move |&(j, c)| (i, j, c))
        })
    }
}

/// Counts, for every pair of items, the partitions that put them together.
pub fn cooccurrence(partitions: &[Partition]) -> Result<CoOccurrence> {
    let first = partitions
        .first()
        .ok_or_else(|| DerError::InvalidInput("at least one partition is required".into()))?;
    let n = first.len();
    if let Some(bad) = partitions.iter().find(|p| p.len() != n) {
        return Err(DerError::InvalidInput(format!(
            "partitions cover different item sets ({} vs {n} items)",
            bad.len()
        )));
    }
    let rows = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], Vec::new()),
            |(counts, touched), i| {
                for p in partitions {
                    for &j in p.members(p.cluster_of(i)) {
                        if j != i {
                            if counts[j] == 0 {
                                touched.push(j);
                            }
                            counts[j] += 1;
                        }
                    }
                }
                touched.sort_unstable();
                let row: Vec<(usize, u32)> = touched.iter().map(|&j| (j, counts[j])).collect();
                for &j in touched.iter() {
                    counts[j] = 0;
                }
                touched.clear();
                row
            },
        )
        .collect();
    Ok(CoOccurrence { runs: partitions.len() as u32, rows })
}

/// `ceil(runs / 2)`.
pub fn threshold(runs: u32) -> u32 {
    runs.div_ceil(2)
}

/// Greedy split: take the lowest unclaimed item `i`, claim every unclaimed
/// `j` with `count(i, j) >= ceil(R / 2)` together with `i`, repeat.
pub fn threshold_cluster(co: &CoOccurrence) -> Partition {
    let t = threshold(co.runs);
    let n = co.n();
    let mut label = vec![usize::MAX; n];
    let mut k = 0;
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        label[i] = k;
        for &(j, c) in co.row(i) {
            if c >= t && label[j] == usize::MAX {
                label[j] = k;
            }
        }
        k += 1;
    }
    Partition::from_assignment(k, label).expect("labels below k")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub repeat: usize,
    pub seed: u64,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    pub best_restart: usize,
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    /// Consensus partition of the active vertices; its cluster count is
    /// data-driven.
    pub partition: Partition,
    pub cooccurrence: CoOccurrence,
    pub runs: Vec<RunSummary>,
}

/// Runs `repeats` independent restarted runs on a prepared graph and merges
/// them. Repeat `r` uses the seed `derive_seed(config.seed, r)`.
pub fn run_repeats_with(der: &Der<'_>, config: &DerConfig, repeats: usize) -> Result<EnsembleResult> {
    if repeats == 0 {
        return Err(DerError::InvalidParameter("repeats must be at least 1".into()));
    }
    config.validate()?;
    let states = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(config.seed, r as u64);
            der.run(&DerConfig { seed, ..config.clone() }).map(|s| (seed, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let runs = states
        .iter()
        .enumerate()
        .map(|(repeat, (seed, s))| RunSummary {
            repeat,
            seed: *seed,
            cost: s.cost(),
            iterations: s.iterations,
            converged: s.converged,
            best_restart: s.restart,
        })
        .collect();
    let partitions: Vec<Partition> = states.into_iter().map(|(_, s)| s.partition).collect();
    let cooccurrence = cooccurrence(&partitions)?;
    let partition = threshold_cluster(&cooccurrence);
    Ok(EnsembleResult { partition, cooccurrence, runs })
}

pub fn run_repeats(g: &Graph, config: &DerConfig, repeats: usize) -> Result<EnsembleResult> {
    config.validate()?;
    let der = Der::new(g, config.walk_length)?;
    run_repeats_with(&der, config, repeats)
}
