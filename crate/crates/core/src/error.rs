use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QismError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("site {site} out of range for chain of length {chain_len}")]
    SiteOutOfRange { site: usize, chain_len: usize },

    #[error("local dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense realization needs {rows} rows, above the cap of {cap}")]
    DenseCapExceeded { rows: usize, cap: usize },

    #[error("exact realization requested but operator holds floating-point entries")]
    NotExact,

    #[error("variable `{0}` has no assigned value")]
    Unassigned(String),

    #[error("zero substituted into a negative power of `{0}`")]
    ZeroToNegativePower(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid spin {0}: 2s must be a positive integer")]
    InvalidSpin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chain length must be at least 1")]
    InvalidChainLength,

    #[error("symbolic mode is not available for {0}")]
    SymbolicUnsupported(String),

    #[error("lattice {rows}x{cols} exceeds the enumeration cap of {cap} vertices")]
    LatticeTooLarge { rows: usize, cols: usize, cap: usize },

    #[error("boundary has {found} tokens, expected {expected}")]
    BoundaryLength { expected: usize, found: usize },

    #[error("configuration space is empty")]
    EmptyConfigurationSpace,

    #[error("bracket nesting depth {depth} exceeds cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },

    #[error("expression contains no bracket")]
    NoBracket,

    #[error("no table entry for elementary bracket {0}")]
    UnresolvedBracket(String),
}

pub type Result<T> = std::result::Result<T, QismError>;

impl QismError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        QismError::Parse { line, message: message.into() }
    }
}
