use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("series has zero constant term and is not invertible")]
    NotAUnit,
    #[error("rational power needs constant term 1, found {0}")]
    Normalization(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("non-generic parameters: {0}")]
    NonGeneric(String),
    #[error("resonance at degree {degree:?}")]
    Resonance { degree: Vec<u32> },
    #[error("intertwiner solution space at degree {degree:?} has dimension {dimension}, expected 1")]
    SolutionDimension { degree: Vec<u32>, dimension: usize },
    #[error("inconsistent linear system at degree {degree:?}")]
    Inconsistent { degree: Vec<u32> },
    #[error("truncation bound {available} too small, need {needed}")]
    DegreeBound { needed: u32, available: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
