use thiserror::Error;

/// Errors raised by the simulator, the trainers and the file readers.
#[derive(Debug, Error)]
pub enum QgaaError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid qubit selection: {0}")]
    InvalidSelection(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParamLength { expected: usize, got: usize },

    #[error("unsupported ansatz: {0}")]
    UnsupportedAnsatz(String),

    #[error("parameter-shift rule not applicable: {0}")]
    NotShiftable(String),

    #[error("label arity mismatch: expected {expected}, got {got}")]
    LabelArity { expected: usize, got: usize },

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("system of {0} qubits is too large for dense diagonalization")]
    Oversized(usize),

    #[error("objective returned NaN after {evaluations} evaluations")]
    NanObjective { evaluations: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, QgaaError>;
