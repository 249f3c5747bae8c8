use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The corpus root is missing or unreadable.
    #[error("cannot read corpus root {path}")]
    CorpusRoot {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no folder named {label:?} with at least {required} emails under the corpus root")]
    LabelNotFound { label: String, required: usize },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("invalid label spec: {0}")]
    LabelSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Violated an internal pipeline invariant. Always a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unsupported dataset layout in {path}: {message}\nfirst lines:\n{head}")]
    UnsupportedFormat {
        path: PathBuf,
        message: String,
        head: String,
    },

    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input (flags, config files, missing
    /// paths) rather than by a failure inside the pipeline.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::CorpusRoot { .. }
                | Error::UnknownLabel(_)
                | Error::LabelSpec(_)
                | Error::Config(_)
                | Error::Usage(_)
        )
    }
}
