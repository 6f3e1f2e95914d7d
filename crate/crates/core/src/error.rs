use thiserror::Error;

/// Errors produced by the covering array toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}; supported orders are 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedOrder(usize),

    #[error("unsupported symbol count g={0}; g-1 must be one of 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedSymbolCount(usize),

    #[error("degree k={k} is too small; at least {min} rows are required")]
    DegreeTooSmall { k: usize, min: usize },

    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid symbol token {token:?} for an alphabet of {g} symbols")]
    InvalidSymbol { token: char, g: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("input array is not a strength-4 covering array")]
    NotCoveringArray,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
