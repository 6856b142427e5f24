use thiserror::Error;

/// Errors produced by the library kernels.
///
/// Integer overflow is always reported, never wrapped: every arithmetic
/// path that can exceed 64 bits goes through checked ops or 128-bit
/// promotion and surfaces [`Error::Overflow`] on failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector ({0:?}) is not primitive")]
    NonPrimitive(Vec<i64>),

    #[error("window of extent {extent} does not fit in a fundamental domain of side {modulus}")]
    WindowTooLarge { extent: f64, modulus: f64 },

    #[error("brute-force enumeration of SL({k}, Z/{m}) has {count} candidate matrices, above the desk-scale cap")]
    EnumerationTooLarge { k: usize, m: u64, count: u128 },

    #[error("no Farey points of the set fall inside the test domain")]
    EmptyIntersection,

    #[error("dimension n = {0} is not supported by this kernel")]
    UnsupportedDimension(usize),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
