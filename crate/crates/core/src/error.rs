use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("index {index} out of range for {len} orbitals")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{what} needs {requested} qubits, ceiling is {ceiling}")]
    QubitCeiling {
        what: &'static str,
        requested: usize,
        ceiling: usize,
    },

    #[error("empty Pauli sum")]
    EmptySum,

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("ragged tensor: {0}")]
    RaggedTensor(String),

    #[error("QR iteration did not converge after {sweeps} sweeps")]
    Convergence { sweeps: usize },

    #[error("operator does not conserve particle number (off-sector element {magnitude:e})")]
    NotNumberConserving { magnitude: f64 },

    #[error("no eigenvalue within {tolerance:e} of {target}")]
    EigenvalueNotFound {
        target: num_complex::Complex64,
        tolerance: f64,
    },

    #[error("basis is numerically dependent at function {index}")]
    DegenerateBasis { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state norm is {norm}, expected 1")]
    Norm { norm: f64 },

    #[error("success probability is zero; eigenvalue magnitude cannot be recovered")]
    ZeroMagnitude,

    #[error("inconsistent probabilities: arccos argument {argument} outside [-1, 1]")]
    InconsistentProbabilities { argument: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
