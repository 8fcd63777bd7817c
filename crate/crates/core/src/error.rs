use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid Henneberg step {index}: {msg}")]
    InvalidStep { index: usize, msg: String },
    #[error("invalid minor index set {0:?}")]
    InvalidMinor(Vec<usize>),
    #[error("missing value for parameter {0}")]
    MissingParameter(String),
    #[error("variable {0} is not in the unknown ordering")]
    UnknownNotInOrder(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("mixed-cell lifting stayed degenerate after {0} attempts")]
    DegenerateLifting(usize),
    #[error("non-generic lengths: {0}")]
    NonGeneric(String),
    #[error("length sampling exhausted {0} attempts")]
    SamplingExhausted(usize),
    #[error("mixed volume disagreement: inclusion-exclusion {inclusion_exclusion}, mixed cells {mixed_cells}")]
    MixedVolumeDisagreement {
        inclusion_exclusion: u64,
        mixed_cells: u64,
    },
    #[error("solver run unreliable: {failed} of {total} paths failed")]
    UnreliableSolve { failed: usize, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
