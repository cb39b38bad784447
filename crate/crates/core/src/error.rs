use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("family `{name}` has identically zero discriminant")]
    SingularFamily { name: String },

    #[error("moment order {0} is outside the supported range 1..=8")]
    MomentOrder(usize),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("family `{0}` does not match any closed-form template")]
    NoTemplate(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate family name `{0}`")]
    DuplicateFamily(String),

    #[error("invalid run configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
