use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field construction: {0}")]
    Field(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("datum: {0}")]
    Datum(String),
    #[error("integrity: {0}")]
    Integrity(String),
    #[error("reduction: {0}")]
    Reduction(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("singular curve (discriminant {0})")]
    Singular(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("sampling: {0}")]
    Sampling(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
