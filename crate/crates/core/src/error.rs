use thiserror::Error;

/// Errors raised by the simulator, model, and experiment machinery.
///
/// The variants line up with the CLI exit codes: configuration and argument
/// problems are usage errors, `Numeric` is a numeric failure, and `Data` /
/// `Io` cover malformed or unreadable inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
