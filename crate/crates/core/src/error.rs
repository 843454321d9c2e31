use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quiver has an oriented cycle: {}", .cycle.join(" -> "))]
    CyclicQuiver { cycle: Vec<String> },

    #[error("arrow `{arrow}` references undeclared vertex `{vertex}`")]
    DanglingArrow { arrow: String, vertex: String },

    #[error("duplicate {kind} identifier `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("vertex data mismatch: {0}")]
    VertexMismatch(String),

    #[error("dimension vector entry at `{vertex}` is negative ({value})")]
    NegativeDimension { vertex: String, value: i64 },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("representations are over different quivers")]
    QuiverMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("morphism does not intertwine along arrow `{arrow}`")]
    IntertwiningViolation { arrow: String },

    #[error("weight does not vanish on the dimension vector (sigma(alpha) = {value})")]
    WeightNotOrthogonal { value: i64 },

    #[error("Ringel form <alpha, beta> = {value}, expected 0")]
    NotOrthogonal { value: i64 },

    #[error("partition {partition} has {len} rows, more than the allowed {max}")]
    TooManyRows { partition: String, len: usize, max: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("codimension condition fails: r*ell - sum |lambda^p| = {defect}")]
    CodimFailure { defect: i64 },

    #[error("flag dimension vector beta is negative at `{vertex}`")]
    NonnegativityFailure { vertex: String },

    #[error("invalid flag problem: {0}")]
    InvalidFlagProblem(String),

    #[error("flag {arm}: subspace {index} is not contained in subspace {}", .index + 1)]
    NotNested { arm: usize, index: usize },

    #[error("need at least {needed} table values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
