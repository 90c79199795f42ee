use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("{what}: size {size} exceeds cap {cap}; {hint}")]
    OverCap {
        what: &'static str,
        size: usize,
        cap: usize,
        hint: &'static str,
    },

    #[error("program failed at superstep {superstep} (unit {unit}): {message}")]
    Program {
        superstep: usize,
        unit: usize,
        message: String,
    },

    #[error("provenance mismatch: {0}")]
    Provenance(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
