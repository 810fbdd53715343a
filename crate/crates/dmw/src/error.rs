use thiserror::Error;

/// Errors raised by parsing, validation and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({from}, {to})")]
    DuplicateEdge { line: usize, from: usize, to: usize },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("digraph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("vertex {0} is not a vertex of the digraph")]
    InvalidVertex(usize),
    #[error("needs at least {0} vertices")]
    TooFewVertices(usize),
    #[error("block {0} of the partition is not a module")]
    NotAModule(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("integer overflow")]
    Overflow,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("negative weight at vertex {0}")]
    NegativeWeight(usize),
    #[error("total weight {total} exceeds threshold {tau}")]
    ThresholdExceeded { total: i64, tau: i64 },
    #[error("pairs violate the disjoint-endpoint requirement")]
    OverlappingEndpoints,
    #[error("anchors must be distinct vertices")]
    DuplicateAnchors,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation of the vertex set")]
    NotAPermutation,
    #[error("quotient with {size} vertices exceeds the limit {limit} for this solver")]
    QuotientTooLarge { size: usize, limit: usize },
    #[error("instance exceeds the oracle budget: {0}")]
    BudgetExceeded(String),
    #[error("malformed witness: {0}")]
    Witness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
