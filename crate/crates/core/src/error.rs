// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DerError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges (total degree is zero)")]
    DegenerateGraph,

    #[error("vertex {0} is isolated and has no transition row")]
    IsolatedVertex(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cluster is empty")]
    EmptyCluster,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, DerError>;
