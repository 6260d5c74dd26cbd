use serde::Serialize;
use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", content = "message")]
pub enum Error {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not separable: {0}")]
    NotSeparable(String),
    #[error("coefficients not integral: {0}")]
    CoefficientsNotIntegral(String),
    #[error("outside ball: {0}")]
    OutsideBall(String),
    #[error("semilinear solve failure: {0}")]
    SemilinearSolveFailure(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("window solve failure: {0}")]
    WindowSolveFailure(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("lambda level overflow: level {0}")]
    LambdaLevelOverflow(u32),
    #[error("unbounded search: {0}")]
    UnboundedSearch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotSeparable(_) => "NotSeparable",
            Error::CoefficientsNotIntegral(_) => "CoefficientsNotIntegral",
            Error::OutsideBall(_) => "OutsideBall",
            Error::SemilinearSolveFailure(_) => "SemilinearSolveFailure",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::WindowSolveFailure(_) => "WindowSolveFailure",
            Error::Parse { .. } => "ParseError",
            Error::LambdaLevelOverflow(_) => "LambdaLevelOverflow",
            Error::UnboundedSearch(_) => "UnboundedSearch",
            Error::InvalidField(_) => "InvalidField",
            Error::Unsupported(_) => "Unsupported",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
