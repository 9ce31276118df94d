use thiserror::Error;

/// Errors surfaced by the command line; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at column {}: {msg}", pos + 1)]
    Syntax { pos: usize, msg: String },
    #[error("type error at column {}: {msg}", pos + 1)]
    Type { pos: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qcomm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
