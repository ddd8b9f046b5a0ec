use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("rank {rank} is smaller than the requested {requested} independent rows")]
    InsufficientRank { rank: usize, requested: usize },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("invalid path: {0}")]
    PathInvalid(String),
    #[error("nodes {0} and {1} are already linked")]
    LinkAlreadyPresent(usize, usize),
    #[error("nodes {0} and {1} are not linked")]
    LinkMissing(usize, usize),
    #[error("nodes {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("invalid code distance {0}")]
    InvalidDistance(usize),
    #[error("inconsistent lattice: {0}")]
    InconsistentLattice(String),
    #[error("region too small: {0}")]
    TooSmall(String),
    #[error("no valid control assignment: {0}")]
    NoValidAssignment(String),
    #[error("no valid witness layout: {0}")]
    NoValidLayout(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("instance too large for dense evaluation: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
