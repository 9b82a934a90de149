use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{n} spins exceeds the configured maximum of {max}")]
    Capacity { n: usize, max: usize },

    #[error("unsupported conjugation generator: {0}")]
    UnsupportedGenerator(String),

    #[error("invalid model: {0}")]
    Validation(String),

    #[error("handle `{0}` is not controllable in this model")]
    NotControllable(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("operator is not Hermitian (largest imaginary coefficient {0:.3e})")]
    NotHermitian(f64),

    #[error("sector mismatch: {0}")]
    Sector(String),

    #[error("degenerate single-particle spectrum on logical qubit {qubit}: {detail}")]
    DegenerateSpectrum { qubit: usize, detail: String },

    #[error("connectivity: {0}")]
    Connectivity(String),

    #[error("unsupported gate for this model: {0}")]
    UnsupportedGate(String),

    #[error("gate {index}: {source}")]
    Gate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
