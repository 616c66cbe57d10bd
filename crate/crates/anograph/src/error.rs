//! Crate-wide error type.

use crate::graph::NodeId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: expected two node tokens, found {found}")]
    Parse { line: usize, found: usize },

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("edge {{{0}, {1}}} does not exist")]
    EdgeAbsent(NodeId, NodeId),

    #[error("edge {{{0}, {1}}} already exists")]
    EdgePresent(NodeId, NodeId),

    #[error("invalid rewiring: {0}")]
    InvalidRewiring(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("cannot select {requested} edges from {available}")]
    SelectionTooLarge { requested: usize, available: usize },

    #[error("neighborhood has {size} nodes, exceeding the canonical-labeling cap of {cap}")]
    NeighborhoodTooLarge { size: usize, cap: usize },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("partitions cover different node sets")]
    NodeSetMismatch,

    #[error("no pair of nodes shares a component")]
    NoConnectedPair,

    #[error("correlation undefined: {0}")]
    DegenerateSeries(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
