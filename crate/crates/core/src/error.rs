use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("density matrix trace deviates from one by {defect:.3e}")]
    NotUnitTrace { defect: f64 },

    #[error("density matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("level index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The commutator of the decay matrix with an operator is not a real
    /// multiple of that operator, so no constant decaying-frame rate exists.
    #[error("proportionality violation for {operator}: residual {residual:.3e}, imaginary rate {imaginary:.3e}")]
    ProportionalityViolation {
        operator: String,
        residual: f64,
        imaginary: f64,
    },

    #[error("integration blew up at step {step} (t = {time})")]
    IntegrationBlowup { step: usize, time: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("trajectory grids differ")]
    GridMismatch,

    #[error("generator is time dependent; a static Liouvillian is required")]
    TimeDependent,

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("config: {0}")]
    Config(String),
}
