use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(String),

    #[error("input length {got} does not match variable count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operands use different moduli")]
    ModulusMismatch,

    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),

    #[error("variable {0} appears twice in one clause")]
    DuplicateVariable(usize),

    #[error("exhaustive enumeration over {n} variables exceeds cap {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("polynomial expansion exceeds {cap} terms")]
    TermCapExceeded { cap: usize },

    #[error("full-range scan over modulus {m} exceeds cap {cap}")]
    FullScanCapExceeded { m: String, cap: u64 },

    #[error("matrix is not unitary (defect {defect:.3e} exceeds {tolerance:.0e})")]
    NotUnitary { defect: f64, tolerance: f64 },

    #[error("state vector norm {norm} is not 1 within {tolerance:.0e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("good set is unverified; verify it or opt in explicitly")]
    UnverifiedGoodSet,

    #[error(
        "good-set search exhausted {attempts} attempts; best max squared cosine average {best_max_sq_avg}"
    )]
    GoodSetSearchExhausted { attempts: u32, best_max_sq_avg: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
