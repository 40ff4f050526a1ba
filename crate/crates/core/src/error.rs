use thiserror::Error;

use crate::exactlin::RationalVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("column {0} is zero: a loop element cannot be linked")]
    LoopElement(usize),

    #[error("constraint rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("polyhedron is empty")]
    Empty,

    #[error("size guardrail exceeded: {0}")]
    Guardrail(String),

    #[error("vertex {0} is degenerate; perturb the right-hand side first")]
    Degenerate(String),

    #[error("polyhedron is not simple; perturb the right-hand side first")]
    NotSimple,

    #[error("skeleton graph is disconnected")]
    Disconnected,

    #[error("objective is unbounded along a ray")]
    Unbounded { ray: RationalVector },

    #[error("lift failed at walk index {index}: {reason}")]
    LiftFailed { index: usize, reason: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
