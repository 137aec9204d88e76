use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} amplitudes for {qubits} qubits, got {got}")]
    WrongLength { qubits: usize, expected: usize, got: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not normalized (norm {norm}); enable renormalization to accept it")]
    NotNormalized { norm: f64 },
    #[error("{qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("unsupported state family `{family}` for {qubits} qubits")]
    UnsupportedFamily { family: String, qubits: usize },
    #[error("rank {rank} is invalid for a {dim}-dimensional density matrix")]
    InvalidRank { rank: usize, dim: usize },
    #[error("density matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has negative eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },
    #[error("density matrix must be square with dimension 2^{qubits}")]
    BadMatrixShape { qubits: usize },
    #[error("dimension mismatch: operator acts on {operator} qubits, state has {state}")]
    DimensionMismatch { operator: usize, state: usize },
    #[error("qubit {qubit} is out of range for a {qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("qubit subset must not be empty")]
    EmptySubset,
    #[error("subset must not contain every qubit")]
    FullSubset,
    #[error("subset needs at least {min} qubits, got {got}")]
    SubsetTooSmall { min: usize, got: usize },
    #[error("operation requires {requirement}, got {qubits} qubits")]
    QubitCount { requirement: &'static str, qubits: usize },
    #[error("invalid Pauli letter `{0}`")]
    InvalidPauliLetter(char),
    #[error("malformed state document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
