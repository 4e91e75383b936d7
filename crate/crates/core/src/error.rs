use thiserror::Error;

use crate::hypergraph::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a hypergraph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },

    #[error("malformed edge {set:?}: {reason}")]
    MalformedEdge { set: Vec<Vertex>, reason: String },

    #[error("duplicate edge set {0:?}")]
    DuplicateEdge(Vec<Vertex>),

    #[error("hypergraph has no edges")]
    EmptyHypergraph,

    #[error("uniformity mismatch: expected {expected}, found {found}")]
    UniformityMismatch { expected: usize, found: usize },

    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A caller-asserted precondition turned out to be false.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
