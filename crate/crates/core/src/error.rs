use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} on {n} qubits exceeds the size guard of {max}")]
    SizeGuard {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("cannot parse Pauli string {0:?}")]
    PauliParse(String),

    #[error("unknown code {0:?}")]
    UnknownCode(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("Pauli operator {0} is not Hermitian")]
    NonHermitian(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("error rate {rate} is not below the threshold {threshold}")]
    ThresholdViolated { rate: f64, threshold: f64 },

    #[error("syndrome {0} is uncorrectable")]
    Uncorrectable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
