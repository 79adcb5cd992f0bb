use thiserror::Error;

/// Errors raised by the library. Cap overflows are kept distinct so callers
/// can map them to their own exit status.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CtpError {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid width {0}: must be between 1 and {max}", max = crate::gf2::MAX_WIDTH)]
    InvalidWidth(usize),
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("a block configuration needs at least one block")]
    NoBlocks,
    #[error("sequence is not cyclic: its sum is {0}")]
    NotCyclic(String),
    #[error("element {elem} is not a member of block {block}")]
    NotInBlock { block: usize, elem: String },
    #[error("invalid LOS specification: {0}")]
    InvalidLos(String),
    #[error("point violates preconditions: {0}")]
    InvalidPoint(String),
    #[error("invalid inequality: {0}")]
    InvalidInequality(String),
    #[error("{what} cap exceeded (limit {limit})")]
    CapExceeded { what: &'static str, limit: u64 },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CtpError {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, CtpError::CapExceeded { .. })
    }
}

impl From<std::io::Error> for CtpError {
    fn from(e: std::io::Error) -> Self {
        CtpError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CtpError {
    fn from(e: serde_json::Error) -> Self {
        CtpError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CtpError>;
