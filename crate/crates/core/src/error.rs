use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the layer that raises them; the CLI maps each
/// group onto a process exit code (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix has a cycle of positive weight; closure diverges")]
    PositiveCycle,
    #[error("no finite entry")]
    AllBottom,
    #[error("vector has no finite entry")]
    AllBottomVector,
    #[error("vector has a bottom entry; all entries must be finite")]
    VectorNotFinite,
    #[error("matrix has a bottom entry; all entries must be finite")]
    EntriesNotFinite,

    #[error("digraph has no cycle")]
    Acyclic,
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("critical subgraph is not primitive (cyclicity {0})")]
    NotPrimitive(u64),
    #[error("finite entries are not all equal; the bound applies to unweighted digraphs")]
    Weighted,
    #[error("critical subgraph is primitive; use the primitive bound")]
    AlreadyPrimitive,
    #[error("power matrix is not completely reducible: {0}")]
    StructureViolation(String),
    #[error("cycle enumeration refused: {nodes} nodes exceeds the limit of {limit}")]
    GraphTooLargeForEnumeration { nodes: usize, limit: usize },
    #[error("need at least {needed} integers, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("node {0} is not on the walk")]
    NodeNotOnWalk(usize),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("maximum of the two sequences is not eventually periodic")]
    NotEventuallyPeriodic,
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("ratio mismatch: {0} vs {1}")]
    RatioMismatch(String, String),
    #[error("sequence does not satisfy the period-{period} relation from {from}")]
    PeriodRelationViolated { period: usize, from: usize },
    #[error("certified horizon {bound} exceeds the cap {cap}")]
    HorizonExceeded { bound: String, cap: u64 },
    #[error("internal bound violation: {0}")]
    InternalBoundViolation(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("bad magic line: expected `{expected}`, found `{found}`")]
    MagicMismatch { expected: String, found: String },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::MagicMismatch { .. } | Error::Dimension(_) => 2,
            Error::Io(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
