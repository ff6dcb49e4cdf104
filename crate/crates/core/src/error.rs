use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("cut must be a non-empty proper subset of the {n} vertices")]
    TrivialCut { n: usize },
    #[error("invalid graph family: {0}")]
    InvalidFamily(String),
    #[error("vertex {vertex} out of range for a view with {n} vertices")]
    InvalidSet { vertex: usize, n: usize },
    #[error("vertex sets overlap at {0}")]
    SetsOverlap(usize),
    #[error("no edge crosses the given sets")]
    NoEdge,
    #[error("known-edge view reports a negative count ({0})")]
    InconsistentKnownEdges(i64),
    #[error("source and sink are the same vertex {0}")]
    SameVertex(usize),
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("balanced cut/prune strategy failed: {0}")]
    StrategyFailure(String),
    #[error("aborted after {attempts} pivot attempts on a part of size {part_size}")]
    Aborted { attempts: usize, part_size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
