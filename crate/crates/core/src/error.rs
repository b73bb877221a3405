use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "series did not converge within {max_terms} terms (last term magnitude {last_term:e})"
    )]
    NonConvergent { max_terms: usize, last_term: f64 },

    #[error("gamma function has a pole at {0}")]
    Pole(f64),

    #[error("result of {0}!! does not fit in 64 bits")]
    Overflow(u64),

    #[error("no sign change on bracket [{lo}, {hi}] (residuals {f_lo:e}, {f_hi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root solver stopped after {iterations} iterations (bracket width {width:e})")]
    MaxIterations { iterations: usize, width: f64 },

    #[error("point x = {x} lies beyond the free boundary s(t) = {front}")]
    OutOfDomain { x: f64, front: f64 },

    #[error("grid too coarse: {0}")]
    NeedsMoreGrid(String),

    #[error("boundary extrapolation unstable: estimates {estimates:?}")]
    ExtrapolationUnstable { estimates: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
