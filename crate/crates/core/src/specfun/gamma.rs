//! Gamma-family helpers.
//!
//! `gamma` and `log_gamma` are thin wrappers over the `libm` kernels; the
//! reciprocal Gamma is built on top with the reflection formula so it stays
//! finite (and exactly zero) at the poles.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    // reduce to [-1, 1): sin(π(x + 2m)) = sin(πx)
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else if r > 0.75 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (PI * (0.5 - r)).cos()
    } else {
        -(PI * (0.5 + r)).cos()
    }
}

/// Γ(x). Fails with [`Error::Pole`] at 0, −1, −2, …
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(invalid("gamma of NaN"));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    Ok(libm::tgamma(x))
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(invalid(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// 1/Γ(x); an entire function, zero at the nonpositive integers.
pub fn rgamma(x: f64) -> f64 {
    let (sign, ln_mag) = ln_abs_rgamma(x);
    if sign == 0.0 {
        0.0
    } else if x > 0.0 && x < 170.0 {
        1.0 / libm::tgamma(x)
    } else {
        sign * ln_mag.exp()
    }
}

/// Returns `(sign, ln|1/Γ(x)|)`; sign is 0 at the poles of Γ.
///
/// Negative arguments use 1/Γ(x) = Γ(1−x)·sin(πx)/π, so the magnitude never
/// depends on evaluating Γ close to a pole.
pub(crate) fn ln_abs_rgamma(x: f64) -> (f64, f64) {
    if is_pole(x) {
        return (0.0, f64::NEG_INFINITY);
    }
    if x > 0.0 {
        return (1.0, -ln_gamma(x));
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    (s.signum(), ln_gamma(1.0 - x) + s.abs().ln() - PI.ln())
}

/// Upper envelope for ln|1/Γ(x)| that ignores the oscillating sin(πx) factor.
///
/// Used only to decide when a series tail is negligible: it never vanishes
/// near a pole, so an accidental tiny term cannot trigger early termination.
pub(crate) fn ln_rgamma_envelope(x: f64) -> f64 {
    if x >= 2.0 {
        -ln_gamma(x)
    } else if x > 0.0 {
        // max of 1/Γ on (0, 2) is 1/Γ(x*) ≈ 1.1292
        0.1215
    } else {
        ln_gamma(1.0 - x) - PI.ln()
    }
}

/// (2m−1)!! for an odd argument `n = 2m − 1 ≥ 1`, i.e. n·(n−2)·…·3·1.
pub fn double_factorial(n: u64) -> Result<u64> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(invalid(format!(
            "double_factorial expects an odd positive integer, got {n}"
        )));
    }
    (1..=n)
        .step_by(2)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .ok_or(Error::Overflow(n))
}
