use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("window [{start}, {start}+{len}) exceeds word of length {word_len}")]
    WindowExceedsWord {
        start: usize,
        len: usize,
        word_len: usize,
    },

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: u64 },

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
