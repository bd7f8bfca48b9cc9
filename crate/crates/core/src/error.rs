use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {point} lies on {found} blocks, expected {expected}")]
    NonUniformRank { point: usize, found: usize, expected: usize },

    #[error("block {block} has {found} points, expected {expected}")]
    NonUniformBlockSize { block: usize, found: usize, expected: usize },

    #[error("duplicate block at index {0}")]
    DuplicateBlock(usize),

    #[error("duplicate point label at index {0}")]
    DuplicatePoint(usize),

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("structure too large for search: {vertices} Levi vertices (limit {limit})")]
    TooLarge { vertices: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("prime field GF({0}) is not compiled into the field dispatcher")]
    UnsupportedPrime(u32),

    #[error("cannot parse field `{0}`: expected `q` or `p:PRIME`")]
    FieldSyntax(String),

    #[error("matrix is singular")]
    Singular,

    /// An exactly checked identity did not hold. This indicates a bug, not bad input.
    #[error("identity check failed: {0}")]
    Falsified(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
