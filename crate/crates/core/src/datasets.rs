// SPDX-License-Identifier: Apache-2.0

//! Small bundled reference graphs.

/// Zachary's karate club: 34 members, 78 friendship edges, vertex ids `0..33`.
pub const KARATE_EDGES: &str = include_str!("../data/karate.edges");

/// Observed split of the club after the fission, as a partition file
/// (`id<TAB>faction`, 0 = instructor's faction, 1 = officer's faction).
pub const KARATE_TRUTH: &str = include_str!("../data/karate.truth");
