//! Special functions: Gamma family, error functions, Wright and Mainardi.

mod erf;
mod gamma;
mod wright;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use erf::{erf, erfc};
pub use gamma::{double_factorial, gamma, log_gamma, rgamma};
pub use wright::{
    mainardi, mainardi_with, wright, wright_decaying, wright_detailed, SeriesAccuracy, WrightEval,
    WrightValue,
};

/// Fractional order α ∈ (0, 1]; α = 1 is the classical limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub const ONE: Alpha = Alpha(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Alpha(value))
        } else {
            Err(invalid(format!("alpha must lie in (0, 1], got {value}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// α/2, the (negated) Wright parameter of the similarity solutions.
    #[inline]
    pub fn half(self) -> f64 {
        0.5 * self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = crate::error::Error;
    fn try_from(v: f64) -> Result<Self> {
        Alpha::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
