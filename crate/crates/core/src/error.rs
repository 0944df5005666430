use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (max deviation {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e}, max {max_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64, max_eigenvalue: f64 },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("transmit power must be positive, got {0}")]
    NonPositivePower(f64),
    #[error("receiver channel h_r is zero")]
    ZeroReceiverChannel,
    #[error("eavesdropper channel already has full column rank {0}; nothing to reduce")]
    FullColumnRank(usize),
    #[error("degenerate certificate: h_r^H psi_max vanishes with lambda_max = {0}")]
    DegenerateCertificate(f64),
    #[error("certificate does not match channel: {0}")]
    CertificateMismatch(String),
    #[error("infeasible power allocation: E[rho] = {expected} exceeds budget {budget}")]
    InfeasibleAllocation { expected: f64, budget: f64 },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
