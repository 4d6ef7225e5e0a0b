use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("turning total {value} is not within 0.1 of an integer")]
    NonIntegerTurning { value: f64 },
    #[error("invalid curve document: {0}")]
    InvalidDocument(String),
}
