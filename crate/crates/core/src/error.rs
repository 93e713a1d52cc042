use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("item {item} is outside the ground set of size {ground_set_size}")]
    ItemOutOfRange { item: usize, ground_set_size: usize },

    #[error("item {0} appears more than once")]
    DuplicateItem(usize),

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// The exchange construction found no admissible partner. Only possible
    /// when the independence oracle does not describe a matroid.
    #[error("no exchange candidate for position {position} of the chosen basis")]
    ExchangeFailed { position: usize },

    #[error("exhaustive enumeration refused: {items} items exceeds the limit of {limit}")]
    TooLarge { items: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("feedback does not match the chosen basis: {0}")]
    FeedbackMismatch(String),

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
