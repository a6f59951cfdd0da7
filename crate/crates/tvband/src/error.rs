use std::fmt;

use crate::pair::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid pair: {0}")]
    InvalidPair(ValidationReport),

    #[error("pair is not normalized (admissibility sum {sum}, expected pi)")]
    NotNormalized { sum: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: Point },

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),

    #[error("sample points outside signal window {window:?}: {points:?}")]
    OutOfWindow { window: (f64, f64), points: Vec<f64> },

    #[error("step size collapsed to {step:e} at s = {s}")]
    Stiffness { s: f64, step: f64 },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("quadrature did not converge: relative change {achieved:e} > {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },

    #[error("matrix dimension {n} exceeds budget {max}")]
    TooLarge { n: usize, max: usize },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidPair(_)
                | Error::NotNormalized { .. }
                | Error::InvalidArgument(_)
                | Error::OutOfWindow { .. }
                | Error::TooLarge { .. }
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

/// Location attached to pole errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}
