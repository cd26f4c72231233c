use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("variable count mismatch ({left} vs {right})")]
    VariableCount { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("operator of order {found} exceeds the bound {bound}")]
    OrderExceeded { found: u32, bound: u32 },

    #[error("construction requires rank m = 1 (got m = {0})")]
    RankNotOne(usize),

    #[error("derivations have different symbols")]
    SymbolMismatch,

    #[error("missing connection value for generator {0}")]
    MissingGenerator(String),

    #[error("{what} = {found} exceeds the configured cap {cap}")]
    CapExceeded { what: String, found: usize, cap: usize },

    #[error("invalid structure: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_vars(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::VariableCount { left, right })
    }
}
