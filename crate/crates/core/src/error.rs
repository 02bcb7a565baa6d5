use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Dense paths refuse matrices above the configured cap.
    #[error("size error: order {n} exceeds dense cap {cap}")]
    Size { n: usize, cap: usize },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("parse error at {}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Size { .. } => 1,
            Error::Io { .. } | Error::Parse { .. } => 2,
            Error::Numeric(_) => 3,
        }
    }
}
