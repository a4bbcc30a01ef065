use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input: bad dimensions, unparsable values,
    /// missing multiplicities, models that fail validation.
    #[error("input error: {0}")]
    Input(String),

    /// A mathematical precondition failed (class not big, not pseudoeffective, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An enumeration would exceed its documented size bound.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An internal invariant broke; usually a model whose cone data is wrong.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Io { .. } => 3,
            Error::Domain(_) | Error::Resource(_) => 4,
            Error::Internal(_) => 1,
        }
    }
}
