use alloc::string::String;

use crate::graph::NodeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty source set")]
    EmptySources,
    #[error("empty terminal set")]
    EmptyTerminals,
    #[error("empty node set")]
    EmptyNodeSet,
    #[error("node index {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("graph must have at least one node")]
    NoNodes,
    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(NodeId, NodeId),
    #[error("source and sink of a cut must differ")]
    SourceIsSink,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("too many terminals for exact solver ({count} > {limit})")]
    TooManyTerminals { count: usize, limit: usize },
    #[error("invalid Steiner tree: {0}")]
    InvalidTree(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("deadline exceeded")]
    DeadlineExceeded,
    #[error("search did not converge within {0} steps")]
    FuelExhausted(usize),
    #[error("lp: {0}")]
    Lp(String),
    #[error("instance infeasible under pruning: {0}")]
    InfeasibleUnderPruning(String),
    #[error("iterative rounding aborted in iteration {iteration}: {reason}")]
    RoundingAborted { iteration: usize, reason: String },
}
