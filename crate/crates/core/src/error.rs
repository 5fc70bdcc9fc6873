use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("edge {0}-{1} joins two vertices of the same part")]
    IntraPartEdge(Vertex, Vertex),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("no {kind} walk from {from} to {to}: {reason}")]
    NoEvenWalk {
        kind: &'static str,
        from: Vertex,
        to: Vertex,
        reason: String,
    },

    #[error("correction step stuck: no transfer available from {surplus} to {deficit}")]
    Stuck { surplus: Vertex, deficit: Vertex },

    #[error("linear program is {0}")]
    Lp(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty embedding set")]
    EmptyEmbeddingSet,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("threshold not bracketable: success rate {rate} at p = 1 is below target {target}")]
    NotBracketable { rate: f64, target: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
