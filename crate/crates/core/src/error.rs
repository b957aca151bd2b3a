use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variants are grouped roughly by pipeline stage;
/// the CLI maps them onto exit codes, so keep data-shaped failures (schema,
/// corpus, io) distinct from parameter validation and provider failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),

    #[error("unknown node id `{0}`")]
    UnknownNode(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("graph is frozen; mutating operations are rejected")]
    Frozen,

    #[error("graph must be frozen before it can be searched")]
    NotFrozen,

    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("cannot embed empty text")]
    EmptyText,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("provider `{provider}` failed: {message}")]
    Provider { provider: String, message: String },

    #[error("no seed nodes matched the query")]
    NoSeeds,

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attach a path to a raw io error. Bare `io::Error` values rarely say
    /// which file they came from, which makes corpus problems miserable to
    /// debug, so the loader wraps everything through here.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
