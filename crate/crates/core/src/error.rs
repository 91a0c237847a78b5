use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("generator {generator:?} is not an automorphism: {reason}")]
    NotAutomorphism { generator: String, reason: String },
    #[error("generated group exceeds the size cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("{0} is not connected")]
    Disconnected(String),
    #[error("search exceeded its budget of {budget} steps")]
    SearchLimit { budget: u64 },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("representation and covering use different groups")]
    GroupMismatch,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("incomplete irreducible set: {0}")]
    IncompleteIrreps(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
