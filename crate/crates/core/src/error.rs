use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// `nu` is not componentwise below `alpha`, so `D^nu (x - c)^alpha` is identically zero.
    #[error("derivative vanishes: {nu} is not componentwise <= {alpha}")]
    DerivativeVanishes { alpha: String, nu: String },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("unsupported dimension {0} (supported: 1..=4)")]
    UnsupportedDimension(usize),

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("degenerate scale: every node coincides with the center")]
    DegenerateScale,

    #[error("rank deficient: pivot {magnitude:e} below tolerance {tolerance:e} at elimination step {step}")]
    RankDeficient {
        step: usize,
        magnitude: f64,
        tolerance: f64,
    },

    #[error("matrix has {rows} rows but {cols} columns are required")]
    InsufficientRows { rows: usize, cols: usize },

    #[error("insufficient points: degree {degree} needs {needed} nodes, {available} available")]
    InsufficientPoints {
        degree: usize,
        needed: usize,
        available: usize,
    },

    #[error("derivative order {order} exceeds interpolation degree {degree}")]
    OrderTooHigh { order: usize, degree: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Failures that come from the numerics rather than from the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::InsufficientPoints { .. }
                | Error::InsufficientRows { .. }
                | Error::DegenerateScale
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
