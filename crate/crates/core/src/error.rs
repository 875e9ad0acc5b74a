use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} {value} is outside the table range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("c = {c}: {source}")]
    ForParameter {
        c: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}

/// Attaches the offending `c` to an error from a per-parameter job.
pub(crate) fn for_c(c: &crate::rational::RationalC) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::ForParameter {
        c: c.to_string(),
        source: Box::new(e),
    }
}

impl Error {
    /// The innermost error, looking through parameter context.
    pub fn root(&self) -> &Error {
        match self {
            Error::ForParameter { source, .. } => source.root(),
            other => other,
        }
    }
}
