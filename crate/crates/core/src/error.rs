use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("weight is not type 1 unitary: {0}")]
    NotUnitary(String),
    #[error("negative radicand {0}")]
    NegativeRadicand(Rational),
    #[error("zero denominator in {0}")]
    ZeroDenominator(String),
    #[error("pole in {0}")]
    Pole(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("module dimension exceeds the limit of {0}")]
    TooLarge(usize),
    #[error("kernel failure: {0}")]
    Kernel(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
