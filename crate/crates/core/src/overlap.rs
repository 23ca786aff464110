// SPDX-License-Identifier: Apache-2.0

//! Overlapping communities from a converged partition.
//!
//! `m_i(s) = mu_s(i) pi(P_s) / pi(i)` is the probability that a walk which
//! ended at `i` started in cluster `s`. Vertex `i` joins every community whose
//! membership is at least `theta` times its best one.

use rayon::prelude::*;

use crate::der::{ClusterMeasures, Der};
use crate::error::{DerError, Result};

pub const DEFAULT_THETA: f64 = 0.5;

/// Membership probabilities, one row per active vertex (diffusion-set
/// position), one column per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipProfile {
    rows: Vec<Vec<f64>>,
}

impl MembershipProfile {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }
}

/// Communities `C_1..C_k`; an item may belong to several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityCover {
    communities: Vec<Vec<usize>>,
    memberships: Vec<Vec<usize>>,
}

impl CommunityCover {
    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    /// Ascending community indices of item `i`.
    pub fn memberships(&self, i: usize) -> &[usize] {
        &self.memberships[i]
    }

    pub fn len(&self) -> usize {
        self.memberships.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memberships.is_empty()
    }
}

pub fn membership(der: &Der<'_>, measures: &ClusterMeasures) -> MembershipProfile {
    let pi = &der.stationary().pi;
    let rows = der
        .diffusion()
        .vertices()
        .par_iter()
        .map(|&v| {
            (0..measures.k())
                .map(|s| measures.measure(s)[v] * measures.mass(s) / pi[v])
                .collect()
        })
        .collect();
    MembershipProfile { rows }
}

/// `i` joins `C_t` iff `m_i(t) >= theta * max_s m_i(s)`, `theta` in `(0, 1]`.
pub fn extract_cover(profile: &MembershipProfile, theta: f64) -> Result<CommunityCover> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(DerError::InvalidParameter(format!("theta = {theta} must lie in (0, 1]")));
    }
    let k = profile.rows.first().map_or(0, Vec::len);
    let mut communities = vec![Vec::new(); k];
    let memberships: Vec<Vec<usize>> = profile
        .rows
        .iter()
        .map(|row| {
            let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (0..row.len()).filter(|&t| row[t] >= theta * best).collect()
        })
        .collect();
    for (i, ms) in memberships.iter().enumerate() {
        for &t in ms {
            communities[t].push(i);
        }
    }
    Ok(CommunityCover { communities, memberships })
}
