use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: f64 },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node index {0} out of range")]
    NodeIndex(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node `{0}` has zero total transformed out-weight")]
    ZeroRow(String),

    #[error("singular system: pivot {pivot} at column {column}")]
    Singular { column: usize, pivot: f64 },

    #[error("{0}")]
    Numerical(String),

    #[error("evaluation: {0}")]
    Evaluation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical kernels rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::Numerical(_) | Error::ZeroRow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
