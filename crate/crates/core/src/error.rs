use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("graph is not a tree")]
    NotATree,

    #[error("{what}: expected length {expected}, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("marginal kind mismatch: expected {expected}, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid marginal: {0}")]
    InvalidMarginal(String),

    #[error("invalid subtree distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid centrality: {0}")]
    InvalidCentrality(String),

    #[error("{what} exceeded the limit of {limit}")]
    LimitExceeded { what: &'static str, limit: usize },

    #[error("{what} has size {size}, above the guard of {guard}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        guard: usize,
    },

    #[error("integer overflow while counting {0}")]
    Overflow(&'static str),

    #[error("linear system is singular or ill-conditioned (rcond = {rcond:e})")]
    IllConditioned { rcond: f64 },

    #[error("no acceptable {what} after {attempts} draws")]
    RetriesExhausted { what: &'static str, attempts: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that signal an instance too large for the exact machinery,
    /// as opposed to malformed input.
    pub fn is_size_limit(&self) -> bool {
        matches!(
            self,
            Error::LimitExceeded { .. } | Error::GuardExceeded { .. } | Error::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
