use thiserror::Error;

/// Failures before a verdict exists. Cap violations exit with 3, the rest
/// with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed problem file at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("{path}: {source}")]
    Input { path: String, source: diolic::Error },

    #[error("{path}: {message}")]
    Shape { path: String, message: String },

    #[error("{what} = {found} exceeds the cap {cap}")]
    Cap { what: String, found: usize, cap: usize },

    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn at(path: &str, source: diolic::Error) -> Self {
        match source {
            diolic::Error::CapExceeded { what, found, cap } => CliError::Cap { what, found, cap },
            source => CliError::Input {
                path: path.to_string(),
                source,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap { .. } => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
