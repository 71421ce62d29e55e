use std::path::{Path, PathBuf};

use thiserror::Error;

/// A malformed dataset file.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error in {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("data error: {0}")]
    Data(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] jpsn::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 0 success, 1 usage or configuration, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Parse { .. } | CliError::Data(_) | CliError::Io { .. } => 2,
            CliError::Model(e) => match e.root() {
                jpsn::Error::Numerical(_) => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Data("x".into()).exit_code(), 2);
        let numerical = jpsn::Error::Numerical("not positive definite".into());
        assert_eq!(CliError::Model(numerical.clone()).exit_code(), 3);
        let wrapped = jpsn::Error::AtIteration {
            iteration: 4,
            source: Box::new(numerical),
        };
        assert_eq!(CliError::Model(wrapped).exit_code(), 3);
        let domain = jpsn::Error::InsufficientData("empty".into());
        assert_eq!(CliError::Model(domain).exit_code(), 2);
    }
}
