use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("basis of size {size} exceeds the cap of {cap}")]
    BasisTooLarge { size: usize, cap: usize },

    #[error("eigenvalue {0} is not present in the spectrum")]
    ModeNotInSpectrum(i64),

    #[error("mode {0} is not in the admissible set S_L")]
    InadmissibleMode(i64),

    #[error("parameters (n = {n}, b = {b}) are not degenerate")]
    NotDegenerate { n: usize, b: f64 },

    #[error("point {r} lies outside the valid interval ({lo}, {hi})")]
    OutsideValidInterval { r: f64, lo: f64, hi: f64 },

    #[error("support [{lo}, {hi}] is not contained in ({inner}, {outer})")]
    SupportViolation { lo: f64, hi: f64, inner: f64, outer: f64 },

    #[error("solver did not converge; best bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
