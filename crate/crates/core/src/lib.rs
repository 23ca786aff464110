// SPDX-License-Identifier: Apache-2.0

//! Community detection by the diffusion entropy reducer.
//!
//! Vertices are embedded as averaged short random-walk distributions and
//! clustered by a k-means loop that maximizes a log-likelihood cost. On top of
//! the core loop the crate provides repeated-run consensus, overlapping
//! covers, partition metrics and a stochastic block model harness.
//!
//! ```
//! use der_core::{Graph, DerConfig};
//!
//! let g = Graph::from_edge_list("a b\nb c\nc a\nd e\ne f\nf d").unwrap();
//! let state = der_core::der::run(&g, &DerConfig { seed: 1, ..DerConfig::new(2, 1) }).unwrap();
//! assert_eq!(state.partition.sizes(), vec![3, 3]);
//! ```

pub mod datasets;
pub mod der;
pub mod diffusion;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod overlap;
pub mod sbm;
pub mod seed;

pub use der::{ClusterMeasures, Der, DerConfig, DerState, EntropyDecomposition, Partition};
pub use diffusion::{DiffusionSet, SparseMeasure};
pub use ensemble::{CoOccurrence, EnsembleResult};
pub use error::{DerError, Result};
pub use graph::{Graph, GraphBuilder, StationaryMeasure};
pub use overlap::{CommunityCover, MembershipProfile};
pub use sbm::{RecoveryReport, SbmSpec};
