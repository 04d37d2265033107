//! Error type shared by all core operations.

use alloc::string::String;
use core::fmt;

/// Errors from graph construction, measure propagation, and transport.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An edge endpoint is outside `0..n`.
    EdgeOutOfRange { edge: (usize, usize), nodes: usize },
    /// An edge of the form `(v, v)`.
    SelfLoop { node: usize },
    /// A node id passed to an operation is outside `0..n`.
    NodeOutOfRange { node: usize, nodes: usize },
    /// A configuration parameter is outside its valid range.
    InvalidParameter(String),
    /// The random walk is undefined at a degree-zero node.
    IsolatedNode { node: usize },
    /// Supply and demand totals disagree beyond tolerance.
    UnbalancedMarginals { supply: f64, demand: f64 },
    /// Two measure supports do not lie in one connected component.
    DisconnectedSupports,
    /// Curvature is undefined for a pair with `x == y`.
    IdenticalNodes { node: usize },
    /// A positive-residual pair has no recorded distance; the BFS cap was
    /// chosen too small by the caller.
    ResidualDistanceUnknown { pair: (usize, usize) },
    /// Malformed edge-list text.
    EdgeListParse { line: usize, reason: String },
    /// A solver invariant failed; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EdgeOutOfRange { edge, nodes } => write!(
                f,
                "edge ({}, {}) references a node outside 0..{}",
                edge.0, edge.1, nodes
            ),
            Error::SelfLoop { node } => write!(f, "self-loop at node {node} rejected"),
            Error::NodeOutOfRange { node, nodes } => {
                write!(f, "node {node} outside 0..{nodes}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::IsolatedNode { node } => {
                write!(f, "random walk undefined at isolated node {node}")
            }
            Error::UnbalancedMarginals { supply, demand } => write!(
                f,
                "unbalanced marginals: supply sums to {supply}, demand to {demand}"
            ),
            Error::DisconnectedSupports => write!(f, "disconnected supports"),
            Error::IdenticalNodes { node } => {
                write!(f, "curvature undefined for identical nodes ({node})")
            }
            Error::ResidualDistanceUnknown { pair } => write!(
                f,
                "internal error: residual pair ({}, {}) has no distance under the BFS cap",
                pair.0, pair.1
            ),
            Error::EdgeListParse { line, reason } => {
                write!(f, "edge-list parse error on line {line}: {reason}")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
