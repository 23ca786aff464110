// SPDX-License-Identifier: Apache-2.0

//! Planted-partition stochastic block models and the one-iteration recovery
//! experiment for two equal blocks with walk length one.
//!
//! With `L = 1`, the comparison `D(w_i, mu_C1) > D(w_i, mu_C2)` for an
//! initial bipartition `C1, C2` is driven by the difference in the number of
//! two-step paths from `i` into `C1` and `C2`. The helpers here count those
//! paths exactly and give their expectation under the model.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::der::{random_equal_partition, Der, Partition, DEFAULT_MAX_ITERS};
use crate::error::{DerError, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::metrics::nmi;
use crate::seed::derive_seed;

/// `n` vertices in `k` equal contiguous blocks; pairs inside a block are
/// joined with probability `p`, pairs across blocks with probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SbmSpec {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
}

impl SbmSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(DerError::InvalidParameter(m));
        if self.k == 0 || self.n == 0 || !self.n.is_multiple_of(self.k) {
            return bad(format!("n = {} must be a positive multiple of k = {}", self.n, self.k));
        }
        if !(0.0..=1.0).contains(&self.q) || !(0.0..=1.0).contains(&self.p) || self.q > self.p {
            return bad(format!("need 0 <= q <= p <= 1, got p = {}, q = {}", self.p, self.q));
        }
        Ok(())
    }

    pub fn block_of(&self, v: usize) -> usize {
        v / (self.n / self.k)
    }
}

/// Draws a graph with vertex ids `"0".."n-1"` and returns it with the block
/// label of every vertex. Each unordered pair is sampled once; no self-loops.
pub fn sample_sbm(spec: &SbmSpec) -> Result<(Graph, Vec<usize>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut builder = GraphBuilder::with_numbered_vertices(spec.n);
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            let prob = if spec.block_of(i) == spec.block_of(j) { spec.p } else { spec.q };
            if rng.gen::<f64>() < prob {
                builder.add_edge_by_index(i, j, 1.0);
            }
        }
    }
    let planted = (0..spec.n).map(|v| spec.block_of(v)).collect();
    Ok((builder.build(), planted))
}

/// Number of walks `i -> j -> v` with `v` in `targets`, i.e. the sum over
/// neighbors `j` of `i` of `|N(j) ∩ targets|`. Walks returning to `i` count
/// when `i` is a target.
pub fn count_two_paths(g: &Graph, i: usize, targets: &[usize]) -> Result<u64> {
    if !g.is_unweighted() {
        return Err(DerError::Unsupported("two-path counts need an unweighted graph".into()));
    }
    let mut in_targets = vec![false; g.n()];
    for &t in targets {
        in_targets[t] = true;
    }
    Ok(g.neighbors(i)
        .iter()
        .map(|&(j, _)| g.neighbors(j).iter().filter(|&&(v, _)| in_targets[v]).count() as u64)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitCluster {
    First,
    Second,
}

/// Expected two-path count from a vertex of `block` into an initial cluster
/// for two blocks of `n / 2` vertices, where the first initial cluster holds
/// `n1` vertices of the first block and `n2` of the second
/// (`n1 + n2 = n / 2`). Self-exclusions are ignored, as in the leading-order
/// count.
pub fn expected_two_paths(n: usize, n1: usize, n2: usize, p: f64, q: f64, block: Block, target: InitCluster) -> Result<f64> {
    if 2 * (n1 + n2) != n {
        return Err(DerError::InvalidParameter(format!(
            "n1 + n2 = {} must equal n / 2 = {}",
            n1 + n2,
            n as f64 / 2.0
        )));
    }
    let (same, other) = match (block, target) {
        (Block::First, InitCluster::First) | (Block::Second, InitCluster::Second) => (n1, n2),
        _ => (n2, n1),
    };
    let (same, other) = (same as f64, other as f64);
    Ok(0.5 * n as f64 * (same * p * p + 2.0 * p * q * other + same * q * q))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// `|C1 ∩ P1| - |C1 ∩ P2|` of the random initialization.
    pub init_bias: i64,
    /// Exact recovery after one means step and one assignment step.
    pub success: bool,
    pub nmi: f64,
    /// Outcome after iterating to a fixed point from the one-step partition.
    pub converged_success: bool,
    pub converged_nmi: f64,
    pub iterations: usize,
    /// True when further iterations changed the one-step partition.
    pub changed_after_first: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub spec: SbmSpec,
    pub walk_length: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_nmi: f64,
    pub converged_success_rate: f64,
    pub mean_seconds: f64,
    pub records: Vec<TrialRecord>,
}

fn run_trial(spec: &SbmSpec, walk_length: usize, trial: usize, seed: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let draw = SbmSpec { seed: derive_seed(seed, 0), ..*spec };
    let (g, planted) = sample_sbm(&draw)?;
    let der = Der::new(&g, walk_length)?;
    let active = der.diffusion().vertices();
    let planted_active: Vec<usize> = active.iter().map(|&v| planted[v]).collect();
    let init = random_equal_partition(active.len(), spec.k, derive_seed(seed, 1))?;
    let init_bias = init
        .members(0)
        .iter()
        .map(|&p| if planted_active[p] == 0 { 1i64 } else { -1 })
        .sum();
    let one_step = der.refine(init, 1).partition;
    let planted_partition = Partition::from_labels(&planted_active);
    let success = one_step.same_grouping(&planted_partition);
    let first_nmi = nmi(one_step.assignment(), &planted_active)?;
    let converged = der.refine(one_step.clone(), DEFAULT_MAX_ITERS);
    Ok(TrialRecord {
        trial,
        seed,
        init_bias,
        success,
        nmi: first_nmi,
        converged_success: converged.partition.same_grouping(&planted_partition),
        converged_nmi: nmi(converged.partition.assignment(), &planted_active)?,
        iterations: converged.iterations,
        changed_after_first: converged.partition != one_step,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Independent trials, each with a fresh graph and a fresh random equal
/// bipartition. Trial `t` uses the seed `derive_seed(seed, t)`.
pub fn recovery_experiment(spec: &SbmSpec, walk_length: usize, trials: usize, seed: u64) -> Result<RecoveryReport> {
    spec.validate()?;
    if spec.k != 2 {
        return Err(DerError::InvalidParameter("recovery experiment needs k = 2".into()));
    }
    if trials == 0 {
        return Err(DerError::InvalidParameter("trials must be at least 1".into()));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(spec, walk_length, t, derive_seed(seed, t as u64)))
        .collect::<Result<Vec<_>>>()?;
    let n = trials as f64;
    let successes = records.iter().filter(|r| r.success).count();
    Ok(RecoveryReport {
        spec: *spec,
        walk_length,
        trials,
        successes,
        success_rate: successes as f64 / n,
        mean_nmi: records.iter().map(|r| r.nmi).sum::<f64>() / n,
        converged_success_rate: records.iter().filter(|r| r.converged_success).count() as f64 / n,
        mean_seconds: records.iter().map(|r| r.seconds).sum::<f64>() / n,
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignDiagnostic {
    pub vertices: usize,
    /// Fraction of vertices where the exact score comparison and the
    /// two-path comparison prefer the same initial cluster.
    pub agreement: f64,
    /// Fraction of vertices whose exact preference is the initial cluster
    /// holding the larger share of their planted block.
    pub exact_points_to_block: f64,
}

/// Compares, vertex by vertex, `sign(D(w_i, mu_C1) - D(w_i, mu_C2))` with the
/// sign of its linearization
/// `(d2(i, C1) - d2(i, C2)) / lambda + d_i ln(d_C2 / d_C1)`,
/// where `lambda` is the mean number of edges from a vertex into `C2`.
///
/// `planted` and `init` hold 0/1 labels for every graph vertex.
pub fn sign_diagnostic(g: &Graph, planted: &[usize], init: &[usize]) -> Result<SignDiagnostic> {
    if planted.len() != g.n() || init.len() != g.n() {
        return Err(DerError::InvalidInput("labels must cover every vertex".into()));
    }
    if init.iter().chain(planted).any(|&l| l > 1) {
        return Err(DerError::InvalidInput("labels must be 0 or 1".into()));
    }
    let der = Der::new(g, 1)?;
    let active = der.diffusion().vertices().to_vec();
    let init_active: Vec<usize> = active.iter().map(|&v| init[v]).collect();
    let partition = Partition::from_assignment(2, init_active)?;
    let measures = der.means_step(&partition);

    let members = |c: usize| -> Vec<usize> { (0..g.n()).filter(|&v| init[v] == c).collect() };
    let (c1, c2) = (members(0), members(1));
    let d_c1: f64 = c1.iter().map(|&v| g.degree(v)).sum();
    let d_c2: f64 = c2.iter().map(|&v| g.degree(v)).sum();
    let lambda = d_c2 / active.len() as f64;

    // Initial cluster holding most of each planted block.
    let mut overlap = [[0i64; 2]; 2];
    for v in 0..g.n() {
        overlap[planted[v]][init[v]] += 1;
    }
    let majority = |block: usize| if overlap[block][0] >= overlap[block][1] { 0 } else { 1 };

    let mut agree = 0usize;
    let mut to_block = 0usize;
    for (pos, &v) in active.iter().enumerate() {
        let exact = der
            .score_to(pos, &measures, 0)
            .partial_cmp(&der.score_to(pos, &measures, 1))
            .unwrap_or(std::cmp::Ordering::Equal);
        let d2_diff = count_two_paths(g, v, &c1)? as f64 - count_two_paths(g, v, &c2)? as f64;
        let degree_term = if d_c1 > 0.0 && d_c2 > 0.0 { g.degree(v) * (d_c2 / d_c1).ln() } else { 0.0 };
        let linear = if lambda > 0.0 { d2_diff / lambda + degree_term } else { 0.0 };
        let linear = linear.partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Equal);
        if exact == linear {
            agree += 1;
        }
        let preferred = match exact {
            std::cmp::Ordering::Greater => Some(0),
            std::cmp::Ordering::Less => Some(1),
            std::cmp::Ordering::Equal => None,
        };
        if preferred == Some(majority(planted[v])) {
            to_block += 1;
        }
    }
    let n = active.len().max(1) as f64;
    Ok(SignDiagnostic {
        vertices: active.len(),
        agreement: agree as f64 / n,
        exact_points_to_block: to_block as f64 / n,
    })
}
