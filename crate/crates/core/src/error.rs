use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("argument {0} is a pole")]
    Pole(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("backends disagree: quadrature {quadrature}, residue {residue}")]
    BackendDisagreement { quadrature: f64, residue: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("wrong mode: {0}")]
    Mode(String),
}
