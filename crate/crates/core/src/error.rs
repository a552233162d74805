use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit categories: argument problems are usage
/// errors, `Consistency` signals an internal identity that failed to hold, and
/// `Budget` is an explicit refusal to enumerate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("missing spectrum for bit-channel {index} at N = {len}")]
    MissingSpectrum { len: usize, index: usize },

    #[error("malformed file {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
