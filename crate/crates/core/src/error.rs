use thiserror::Error;

/// Errors raised by state construction, witness evaluation and the Gaussian model.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid subsystem signature: {0}")]
    InvalidSignature(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotUnity { trace: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {value:e})")]
    NegativeEigenvalue { value: f64 },

    #[error("state vector is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid party set: {0}")]
    InvalidPartySet(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("expected {expected} parties, found {found}")]
    PartyCount { expected: String, found: usize },

    #[error("operation requires every party to be a qubit, signature is {0:?}")]
    NotQubits(Vec<usize>),

    #[error("basis vectors are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("bases are not maximally conjugate: omega {omega} < dimension {dim}")]
    NotConjugate { omega: f64, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element bound {0} exceeds sqrt(2); input is not a valid state")]
    BoundOutOfRange(f64),

    #[error("singular conditioning block: {0}")]
    Singular(String),

    #[error("degenerate histogram: only {occupied} bins carry mass")]
    DegenerateHistogram { occupied: usize },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics on otherwise well-formed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_) | Error::NoBracket { .. } | Error::DegenerateHistogram { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
