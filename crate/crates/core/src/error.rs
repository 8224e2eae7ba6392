use thiserror::Error;

/// Errors raised by the graph, walk, density, inference and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph contains a cycle")]
    Cyclic,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("weight of edge {edge} must be strictly positive, got {value}")]
    NonPositiveWeight { edge: usize, value: String },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex `{0}` has no incident edges")]
    Stuck(String),
    #[error("{0} is undefined for a path with no steps")]
    EmptyPath(&'static str),
    #[error("`{from}` and `{to}` are not adjacent")]
    NotAnEdge { from: String, to: String },
    #[error("path starts at `{got}` but the law starts at `{expected}`")]
    StartMismatch { expected: String, got: String },
    #[error("edge set is not a spanning tree")]
    NotSpanning,
    #[error("current violates Kirchhoff's rule at vertex `{vertex}` (imbalance {imbalance:e})")]
    NotInCycleSpace { vertex: String, imbalance: f64 },
    #[error("{what}: {size} exceeds the enumeration limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("point is not in the open simplex: {0}")]
    OutsideSimplex(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
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

pub type Result<T> = std::result::Result<T, Error>;
