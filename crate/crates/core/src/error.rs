use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{name} = {value} is outside {allowed}")]
    OutOfRange {
        name: &'static str,
        value: String,
        allowed: String,
    },
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("unknown curve id {0:?}")]
    UnknownCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(
    name: &'static str,
    value: impl ToString,
    allowed: impl ToString,
) -> Error {
    Error::OutOfRange {
        name,
        value: value.to_string(),
        allowed: allowed.to_string(),
    }
}
