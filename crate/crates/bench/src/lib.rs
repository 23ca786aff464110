// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the criterion benches.

use der_core::sbm::{sample_sbm, SbmSpec};
use der_core::Graph;

/// Two-block planted partition graph used across benches.
pub fn two_block_graph(n: usize, p: f64, q: f64) -> Graph {
    sample_sbm(&SbmSpec { n, k: 2, p, q, seed: 42 })
        .expect("valid model parameters")
        .0
}

pub fn karate() -> Graph {
    Graph::from_edge_list(der_core::datasets::KARATE_EDGES).expect("bundled graph parses")
}
