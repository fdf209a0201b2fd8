//! Error type shared across the crate.

use std::path::PathBuf;

/// All fallible operations in this crate return this error.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// File could not be read or written.
    #[error("persistence error on {path}: {source}")]
    Persistence {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A container or text file does not match its format; `field` names the
    /// offending part ("magic", "version", "kind", "length", ...).
    #[error("format error in {path}: bad {field}")]
    Format { path: PathBuf, field: String },

    /// Dimension mismatch between operands.
    #[error("shape mismatch: {context} (expected {expected}, got {got})")]
    Shape {
        context: String,
        expected: String,
        got: String,
    },

    /// Invalid parameter or configuration value.
    #[error("configuration error: {0}")]
    Config(String),

    /// An iterative numerical routine failed to converge or produced
    /// non-finite values.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn persistence(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Persistence {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, field: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            field: field.into(),
        }
    }

    pub(crate) fn shape(
        context: impl Into<String>,
        expected: impl std::fmt::Display,
        got: impl std::fmt::Display,
    ) -> Self {
        Error::Shape {
            context: context.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
