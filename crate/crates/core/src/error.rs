use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter violates its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An argument to an operation is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A numerical consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}
