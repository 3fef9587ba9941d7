use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {message}")]
    MalformedInput { line: usize, message: String },

    #[error("invalid degree spec: {0}")]
    InvalidDegreeSpec(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Some common neighbour of the constrained pair has all its edges forced.
    #[error("distance constraint infeasible: vertex {vertex} has no slack")]
    InfeasibleConstraint { vertex: usize },

    #[error("coloring is not equitable at vertex {vertex}")]
    NotEquitable { vertex: usize },

    #[error("circuit is not a switch on the factor")]
    NotASwitch,

    #[error("enumeration budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::MalformedInput {
            line,
            message: message.into(),
        }
    }
}
