use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed splitting function: {0}")]
    MalformedFunction(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("{what} is limited to {limit} vertices, got {got}")]
    ThresholdExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hyperedge {edge} has infinite spread; use the general sparsifier instead")]
    InfiniteSpread { edge: usize },

    #[error("hyperedge {edge} is not monotone (witness {witness})")]
    NotMonotone { edge: usize, witness: String },

    #[error(
        "clique balancer left {violations} hyperedge(s) with kappa_max/kappa > {gamma} after {iterations} iterations"
    )]
    BalancerFailed {
        gamma: u32,
        violations: usize,
        iterations: usize,
        best: Box<crate::sparsify::spread::StrengthMap>,
    },

    #[error("decode failure: {0}")]
    DecodeFailure(String),

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("json error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors where an algorithm declined to run because a size threshold or
    /// a precondition on the instance was not met.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::ThresholdExceeded { .. }
                | Error::InfiniteSpread { .. }
                | Error::NotMonotone { .. }
                | Error::BalancerFailed { .. }
                | Error::DecodeFailure(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
