use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {vertex} has zero weighted degree, so its default vertex weight would be 0")]
    ZeroMu { vertex: usize },
    #[error("{what} must be a positive rational, got {value}")]
    NonPositiveWeight { what: String, value: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has {n} vertices, at most {max} are supported here")]
    TooManyVertices { n: usize, max: usize },
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("k = {k} is outside 1..={n}")]
    InvalidK { k: usize, n: usize },
    #[error("enumeration needs {count} labelings, budget is {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("graph is not a forest (loop number {beta})")]
    NotAForest { beta: usize },
    #[error("vector is identically zero")]
    ZeroVector,
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("vector entries must be finite")]
    NonFinite,
    #[error("exponent p = {0} must be a finite real >= 1")]
    InvalidP(f64),
    #[error("{0} is not supported")]
    NotSupported(String),
    #[error("vertex {vertex} violates the weighted-degree convention for vertex weights")]
    MuConvention { vertex: usize },
    #[error("scaled integer weights overflow the exact arithmetic range")]
    Overflow,
    #[error("invalid subpartition: {0}")]
    InvalidSubpartition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
