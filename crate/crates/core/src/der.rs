// SPDX-License-Identifier: Apache-2.0

//! The diffusion entropy reducer: k-means over walk measures with the
//! log-likelihood score.
//!
//! Points are the walk measures `w_i` of the active vertices, each counted
//! with multiplicity `d_i`. The means step replaces every cluster by its
//! degree-weighted average measure `mu_s`; the assignment step moves every
//! vertex to the cluster maximizing `D(w_i, mu_s)`. Both steps never decrease
//! the cost `C = sum_s sum_{i in P_s} d_i D(w_i, mu_s)`, so the loop ends at a
//! fixed point.

use log::debug;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffusion::{cluster_measure_dense, score_dense_log, walk_measures, DiffusionSet};
use crate::error::{DerError, Result};
use crate::graph::{Graph, StationaryMeasure};
use crate::seed::derive_seed;

pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_RESTARTS: usize = 3;
pub const DEFAULT_WALK_LENGTH: usize = 5;

/// Hard assignment of `len()` items to clusters `0..k`. Clusters may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_assignment(k: usize, assignment: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = assignment.iter().find(|&&s| s >= k) {
            return Err(DerError::InvalidInput(format!("cluster label {bad} out of range for k = {k}")));
        }
        let mut members = vec![Vec::new(); k];
        for (i, &s) in assignment.iter().enumerate() {
            members[s].push(i);
        }
        Ok(Self { k, assignment, members })
    }

    /// Relabels arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let assignment: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self::from_assignment(seen.len(), assignment).expect("labels are dense")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn members(&self, s: usize) -> &[usize] {
        &self.members[s]
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// True when both partitions group the items identically, ignoring labels
    /// and empty clusters.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        Partition::from_labels(&self.assignment) == Partition::from_labels(&other.assignment)
    }

    fn reassign(&mut self, i: usize, s: usize) {
        let old = self.assignment[i];
        self.members[old].retain(|&x| x != i);
        let pos = self.members[s].partition_point(|&x| x < i);
        self.members[s].insert(pos, i);
        self.assignment[i] = s;
    }
}

/// Uniformly random partition of `0..n_active` into `k` clusters whose sizes
/// differ by at most one.
pub fn random_equal_partition(n_active: usize, k: usize, seed: u64) -> Result<Partition> {
    if k == 0 || k > n_active {
        return Err(DerError::InvalidParameter(format!(
            "k = {k} must be between 1 and the number of active vertices ({n_active})"
        )));
    }
    let mut order: Vec<usize> = (0..n_active).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignment = vec![0; n_active];
    for (slot, &i) in order.iter().enumerate() {
        assignment[i] = slot % k;
    }
    Partition::from_assignment(k, assignment)
}

/// Cluster measures `mu_s` (dense over all graph vertices) with their
/// stationary masses `pi(P_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterMeasures {
    measures: Vec<Vec<f64>>,
    log_measures: Vec<Vec<f64>>,
    masses: Vec<f64>,
}

impl ClusterMeasures {
    pub fn k(&self) -> usize {
        self.measures.len()
    }

    pub fn measure(&self, s: usize) -> &[f64] {
        &self.measures[s]
    }

    /// `pi(P_s)`.
    pub fn mass(&self, s: usize) -> f64 {
        self.masses[s]
    }

    pub(crate) fn log_measure(&self, s: usize) -> &[f64] {
        &self.log_measures[s]
    }
}

/// Entropies of the pair `(Z, Y)`: `Z` is the cluster of `X ~ pi` and `Y` is
/// drawn from `w_X`. All values in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyDecomposition {
    pub h_y_given_z: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub h_z_given_y: f64,
}

/// Outcome of one or more k-means runs.
#[derive(Debug, Clone)]
pub struct DerState {
    /// Partition of the active vertices (positions in the diffusion set).
    pub partition: Partition,
    pub measures: ClusterMeasures,
    /// Number of assignment steps performed.
    pub iterations: usize,
    /// `C` for the initial partition followed by `C` after each iteration
    /// that changed the partition.
    pub cost_trace: Vec<f64>,
    /// True when the last assignment step left the partition unchanged.
    pub converged: bool,
    /// Index of the restart that produced this state.
    pub restart: usize,
}

impl DerState {
    pub fn cost(&self) -> f64 {
        *self.cost_trace.last().expect("trace is never empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerConfig {
    pub k: usize,
    pub walk_length: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub restarts: usize,
}

impl DerConfig {
    pub fn new(k: usize, walk_length: usize) -> Self {
        Self {
            k,
            walk_length,
            seed: 0,
            max_iters: DEFAULT_MAX_ITERS,
            restarts: DEFAULT_RESTARTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(DerError::InvalidParameter(format!("{what} must be at least 1")))
            }
        };
        check(self.k >= 1, "k")?;
        check(self.walk_length >= 1, "walk length")?;
        check(self.max_iters >= 1, "max_iters")?;
        check(self.restarts >= 1, "restarts")
    }
}

/// A graph together with its walk measures, ready for clustering.
#[derive(Debug, Clone)]
pub struct Der<'g> {
    graph: &'g Graph,
    diffusion: DiffusionSet,
    stationary: StationaryMeasure,
}

impl<'g> Der<'g> {
    pub fn new(graph: &'g Graph, walk_length: usize) -> Result<Self> {
        let stationary = graph.stationary()?;
        let diffusion = walk_measures(graph, walk_length)?;
        Ok(Self { graph, diffusion, stationary })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn diffusion(&self) -> &DiffusionSet {
        &self.diffusion
    }

    pub fn stationary(&self) -> &StationaryMeasure {
        &self.stationary
    }

    pub fn n_active(&self) -> usize {
        self.diffusion.len()
    }

    fn check_len(&self, partition: &Partition) {
        assert_eq!(
            partition.len(),
            self.n_active(),
            "partition does not cover the active vertices"
        );
    }

    /// `mu_s = mu_{P_s}` for every cluster. Empty clusters get the zero
    /// measure, which scores negative infinity against every vertex.
    pub fn means_step(&self, partition: &Partition) -> ClusterMeasures {
        self.check_len(partition);
        let d_total = self.graph.total_degree();
        let parts: Vec<(Vec<f64>, Vec<f64>, f64)> = partition
            .clusters()
            .par_iter()
            .map(|members| {
                let mu = cluster_measure_dense(self.graph, &self.diffusion, members);
                let log_mu = mu.iter().map(|&m| m.ln()).collect();
                let d_s: f64 = members
                    .iter()
                    .map(|&p| self.graph.degree(self.diffusion.vertices()[p]))
                    .sum();
                (mu, log_mu, d_s / d_total)
            })
            .collect();
        let mut out = ClusterMeasures {
            measures: Vec::with_capacity(parts.len()),
            log_measures: Vec::with_capacity(parts.len()),
            masses: Vec::with_capacity(parts.len()),
        };
        for (mu, log_mu, mass) in parts {
            out.measures.push(mu);
            out.log_measures.push(log_mu);
            out.masses.push(mass);
        }
        out
    }

    /// `D(w_i, mu_s)` for the vertex at position `pos`.
    pub fn score_to(&self, pos: usize, measures: &ClusterMeasures, s: usize) -> f64 {
        score_dense_log(self.diffusion.measure_at(pos), measures.log_measure(s))
    }

    /// Moves every vertex to its best-scoring cluster, lowest index first
    /// among equal scores. A vertex whose scores are all negative infinity
    /// keeps its cluster.
    pub fn assign_step(&self, partition: &Partition, measures: &ClusterMeasures) -> Partition {
        self.assign_with_scores(partition, measures).0
    }

    fn assign_with_scores(&self, partition: &Partition, measures: &ClusterMeasures) -> (Partition, Vec<f64>) {
        self.check_len(partition);
        let k = measures.k();
        let (assignment, scores): (Vec<usize>, Vec<f64>) = (0..self.n_active())
            .into_par_iter()
            .map(|pos| {
                let mut best = partition.cluster_of(pos);
                let mut best_score = f64::NEG_INFINITY;
                for s in 0..k {
                    let sc = self.score_to(pos, measures, s);
                    if sc > best_score {
                        best = s;
                        best_score = sc;
                    }
                }
                (best, best_score)
            })
            .unzip();
        let next = Partition::from_assignment(k, assignment).expect("labels below k");
        (next, scores)
    }

    /// Refills each empty cluster with the vertex that scores worst against
    /// its own cluster, taken from a cluster with at least two members.
    fn repair_empty_clusters(&self, partition: &mut Partition, scores: &[f64]) -> bool {
        let mut repaired = false;
        for s in 0..partition.k() {
            if !partition.members(s).is_empty() {
                continue;
            }
            let donor = (0..partition.len())
                .filter(|&p| partition.members(partition.cluster_of(p)).len() > 1)
                .min_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
            if let Some(p) = donor {
                debug!("reseeding empty cluster {s} with active vertex {p}");
                partition.reassign(p, s);
                repaired = true;
            }
        }
        repaired
    }

    /// `C = sum_s sum_{i in P_s} d_i D(w_i, mu_s)`.
    pub fn cost(&self, partition: &Partition, measures: &ClusterMeasures) -> f64 {
        self.check_len(partition);
        let terms: Vec<f64> = (0..self.n_active())
            .into_par_iter()
            .map(|pos| {
                let d = self.graph.degree(self.diffusion.vertices()[pos]);
                d * self.score_to(pos, measures, partition.cluster_of(pos))
            })
            .collect();
        terms.iter().sum()
    }

    /// Entropy form of the cost. For measures built from `partition`,
    /// `C = -d_V H(Y|Z)`.
    pub fn entropy_decomposition(&self, partition: &Partition, measures: &ClusterMeasures) -> EntropyDecomposition {
        self.check_len(partition);
        let n = self.graph.n();
        let k = measures.k();
        let mut p_y = vec![0.0; n];
        for s in 0..k {
            for (y, &m) in measures.measure(s).iter().enumerate() {
                p_y[y] += measures.mass(s) * m;
            }
        }
        let plogp = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
        let h_y = -p_y.iter().map(|&x| plogp(x)).sum::<f64>();
        let h_z = -(0..k).map(|s| plogp(measures.mass(s))).sum::<f64>();
        let mut h_y_given_z = 0.0;
        let mut h_z_given_y = 0.0;
        for s in 0..k {
            let mass = measures.mass(s);
            for (y, &m) in measures.measure(s).iter().enumerate() {
                let joint = mass * m;
                if joint > 0.0 {
                    h_y_given_z -= joint * m.ln();
                    h_z_given_y -= joint * (joint / p_y[y]).ln();
                }
            }
        }
        EntropyDecomposition { h_y_given_z, h_y, h_z, h_z_given_y }
    }

    /// Alternates means and assignment steps from `init` until the partition
    /// stops changing or `max_iters` assignment steps have run.
    pub fn refine(&self, init: Partition, max_iters: usize) -> DerState {
        let mut partition = init;
        let mut measures = self.means_step(&partition);
        let mut cost_trace = vec![self.cost(&partition, &measures)];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iters {
            iterations += 1;
            let (mut next, scores) = self.assign_with_scores(&partition, &measures);
            self.repair_empty_clusters(&mut next, &scores);
            if next == partition {
                converged = true;
                break;
            }
            partition = next;
            measures = self.means_step(&partition);
            let c = self.cost(&partition, &measures);
            debug!("iteration {iterations}: cost {c}");
            cost_trace.push(c);
        }
        DerState {
            partition,
            measures,
            iterations,
            cost_trace,
            converged,
            restart: 0,
        }
    }

    /// Refines one random initialization per restart; restart `r` starts
    /// from the seed `derive_seed(config.seed, r)`. States are in restart
    /// order.
    pub fn run_all(&self, config: &DerConfig) -> Result<Vec<DerState>> {
        config.validate()?;
        if config.k > self.n_active() {
            return Err(DerError::InvalidParameter(format!(
                "k = {} exceeds the number of active vertices ({})",
                config.k,
                self.n_active()
            )));
        }
        (0..config.restarts)
            .into_par_iter()
            .map(|r| {
                let init = random_equal_partition(self.n_active(), config.k, derive_seed(config.seed, r as u64))?;
                let mut state = self.refine(init, config.max_iters);
                state.restart = r;
                debug!(
                    "restart {r}: cost {} after {} iterations",
                    state.cost(),
                    state.iterations
                );
                Ok(state)
            })
            .collect()
    }

    /// Best final cost over all restarts, earliest restart on ties.
    pub fn run(&self, config: &DerConfig) -> Result<DerState> {
        Ok(best_state(self.run_all(config)?))
    }

    /// Per-graph-vertex labels: active vertices get their cluster index,
    /// isolated vertices become singleton clusters numbered after `k`.
    pub fn full_labels(&self, partition: &Partition) -> Vec<usize> {
        self.check_len(partition);
        let mut next = partition.k();
        (0..self.graph.n())
            .map(|v| match self.diffusion.position(v) {
                Some(p) => partition.cluster_of(p),
                None => {
                    next += 1;
                    next - 1
                }
            })
            .collect()
    }
}

pub fn best_state(states: Vec<DerState>) -> DerState {
    states
        .into_iter()
        .reduce(|best, s| if s.cost() > best.cost() { s } else { best })
        .expect("at least one restart")
}

/// Builds the walk measures for `g` and runs the restarted k-means loop.
pub fn run(g: &Graph, config: &DerConfig) -> Result<DerState> {
    config.validate()?;
    Der::new(g, config.walk_length)?.run(config)
}
