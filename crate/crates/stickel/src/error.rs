use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("group or ring mismatch: {0}")]
    Mismatch(String),
    #[error("place {0} is ramified")]
    Ramified(String),
    #[error("no stabilization within B = {bound}; increase B")]
    NoStabilization { bound: usize },
    #[error("inexact division: {0}")]
    Inexact(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
