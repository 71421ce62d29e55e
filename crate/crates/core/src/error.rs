use thiserror::Error;

/// Errors raised by the model, the samplers and the scoring code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate step at position {0}")]
    DegenerateStep(usize),
    #[error("initialization error: {0}")]
    Initialization(String),
    #[error("model {model}: {source}")]
    InModel {
        model: String,
        #[source]
        source: Box<Error>,
    },
    #[error("at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_model(self, model: impl Into<String>) -> Self {
        Error::InModel {
            model: model.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, past iteration and model annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } | Error::InModel { source, .. } => source.root(),
            other => other,
        }
    }

    /// True when the error (or the error it wraps) is numerical.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Numerical(_) => true,
            Error::AtIteration { source, .. } | Error::InModel { source, .. } => {
                source.is_numerical()
            }
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
