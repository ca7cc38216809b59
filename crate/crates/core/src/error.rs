use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A covariance matrix or bath violates a positivity constraint.
    #[error("physicality violation: {0}")]
    Physicality(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested closed form does not cover this state.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("{axis} = {value}: {source}")]
    AtPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unphysical(msg: impl Into<String>) -> Self {
        Error::Physicality(msg.into())
    }

    /// Strips any sweep-point context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }
}
