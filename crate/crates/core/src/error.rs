use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit classes: `Parse`/`Domain`/`Io` are input
/// errors, `Contract`/`Undetermined` are contract errors, `BudgetExceeded`
/// is its own class.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {msg} at line {line}")]
    Parse { line: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract error: {0}")]
    Contract(String),
    #[error("undetermined: no gamma *-decides column {col}")]
    Undetermined { col: usize },
    #[error("budget exceeded: more than {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
