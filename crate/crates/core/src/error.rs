use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid operand: {0}")]
    InvalidOperand(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("enumeration of {requested} cubes exceeds the budget of {budget}")]
    Budget { requested: u128, budget: u128 },
    #[error("invalid address: {0}")]
    InvalidAddress(String),
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
