use thiserror::Error;

use crate::setfam::NodeSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe mismatch: {0} vs {1}")]
    UniverseMismatch(usize, usize),

    #[error("node {node} outside universe of size {n}")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Refusal to run an exhaustive procedure beyond its size limit.
    #[error("{0}")]
    Guard(String),

    #[error("infeasible instance: no candidate edge covers core {core}")]
    Infeasible { core: NodeSet },

    #[error("oracle returned overlapping cores {0} and {1}")]
    OverlappingCores(NodeSet, NodeSet),

    #[error("cover not minimal: edge {edge} is the unique cover of no member")]
    CoverNotMinimal { edge: usize },

    #[error("no laminar witness family")]
    NoLaminarWitness,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tree invariant violated: {name}: {detail}")]
    TreeInvariant { name: &'static str, detail: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
