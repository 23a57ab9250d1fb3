use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Io,
    Config,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid data: {0}")]
    Data(String),
    #[error("class `{0}` has no training examples")]
    MissingClass(String),
    #[error(
        "design matrix is rank deficient: column `{column}` is collinear with earlier columns"
    )]
    RankDeficient { column: String },
    #[error("column `{column}` has zero variance")]
    ZeroVariance { column: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } => ErrorKind::Io,
            Error::Config(_) => ErrorKind::Config,
            Error::Record { .. } | Error::Data(_) | Error::MissingClass(_) => ErrorKind::Data,
            Error::RankDeficient { .. } | Error::ZeroVariance { .. } | Error::Numerical(_) => {
                ErrorKind::Numerical
            }
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn record(
        path: impl Into<PathBuf>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Record {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
