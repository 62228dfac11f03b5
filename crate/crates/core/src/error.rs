use thiserror::Error;

/// Errors raised by the solvers and the instance loaders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph not connected")]
    Disconnected,
    #[error("negative edge weight {weight} on ({u}, {v})")]
    NegativeWeight { u: usize, v: usize, weight: f64 },
    #[error("non-finite value in input: {0}")]
    NonFinite(String),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a simple path: vertex {0} repeated")]
    NotSimplePath(usize),
    #[error("distance matrix is not square")]
    NotSquare,
    #[error("tree is not connected or not acyclic")]
    NotATree,
    #[error("cannot split trivial path")]
    TrivialSplit,
    #[error("invalid path count m = {m} for {n} vertices")]
    InvalidPathCount { m: usize, n: usize },
    #[error("penalty vector has length {got}, expected {expected}")]
    PenaltyLength { got: usize, expected: usize },
    #[error("penalties must be finite and nonnegative")]
    NegativePenalty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("trimming precondition violated: {0}")]
    TrimPrecondition(String),
    #[error("path set costs {cost} which exceeds the budget {budget}")]
    OverBudget { cost: f64, budget: f64 },
    #[error("oracle cap exceeded: n = {n} > {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("invalid instance file: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
