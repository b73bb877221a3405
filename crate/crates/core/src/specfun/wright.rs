//! Series evaluation of the Wright function
//!
//! W(z; ρ, β) = Σ_{k≥0} z^k / (k! Γ(ρk + β)),  ρ > −1.
//!
//! Terms are formed in log space, sign · exp(k ln|z| − ln k! + ln|1/Γ(ρk+β)|),
//! so neither the factorial nor the Gamma factor overflows, and terms at the
//! poles of Γ are exactly zero. The partial sums are accumulated with
//! Neumaier's compensated summation.
//!
//! Termination uses an envelope of the terms that drops the oscillating
//! sin(π(ρk+β)) factor: once the envelope decreases with a non-increasing
//! ratio r, the remaining tail is bounded geometrically by env_k · r/(1−r).

use serde::{Deserialize, Serialize};

use super::gamma::{ln_abs_rgamma, ln_gamma, ln_rgamma_envelope, rgamma};
use crate::error::{invalid, Error, Result};

/// Truncation control for a single series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesAccuracy {
    /// Requested absolute bound on the discarded tail.
    pub tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 500,
        }
    }
}

impl SeriesAccuracy {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        let acc = Self { tol, max_terms };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(invalid(format!("series tol must be > 0, got {}", self.tol)));
        }
        if self.max_terms < 1 {
            return Err(invalid("series max_terms must be at least 1"));
        }
        Ok(())
    }
}

/// Arguments of one Wright-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightEval {
    pub z: f64,
    pub rho: f64,
    pub beta: f64,
    pub accuracy: SeriesAccuracy,
}

impl WrightEval {
    /// Evaluation with the default accuracy.
    pub fn new(z: f64, rho: f64, beta: f64) -> Self {
        Self {
            z,
            rho,
            beta,
            accuracy: SeriesAccuracy::default(),
        }
    }

    pub fn with_accuracy(mut self, accuracy: SeriesAccuracy) -> Self {
        self.accuracy = accuracy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.accuracy.validate()?;
        if !(self.rho > -1.0) {
            return Err(invalid(format!(
                "Wright series needs rho > -1, got {}",
                self.rho
            )));
        }
        if !self.z.is_finite() || !self.rho.is_finite() || !self.beta.is_finite() {
            return Err(invalid("Wright arguments must be finite"));
        }
        Ok(())
    }

    pub fn eval(&self) -> Result<f64> {
        wright(self)
    }

    pub fn eval_detailed(&self) -> Result<WrightValue> {
        wright_detailed(self)
    }
}

/// A series value together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightValue {
    pub value: f64,
    /// Bound on the discarded tail.
    pub truncation_bound: f64,
    /// Estimated floating-point error from cancellation between terms.
    pub rounding_bound: f64,
    /// Number of terms summed.
    pub terms: usize,
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// W(z; ρ, β).
pub fn wright(e: &WrightEval) -> Result<f64> {
    wright_detailed(e).map(|v| v.value)
}

/// W(z; ρ, β) with the truncation and rounding estimates.
pub fn wright_detailed(e: &WrightEval) -> Result<WrightValue> {
    e.validate()?;
    let WrightEval {
        z,
        rho,
        beta,
        accuracy,
        ..
    } = *e;
    if z == 0.0 {
        return Ok(WrightValue {
            value: rgamma(beta),
            truncation_bound: 0.0,
            rounding_bound: f64::EPSILON * rgamma(beta).abs(),
            terms: 1,
        });
    }

    let ln_abs_z = z.abs().ln();
    let negative = z < 0.0;
    let half_tol = 0.5 * accuracy.tol;

    let mut acc = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut max_exponent: f64 = 0.0;
    let mut prev_env: Option<f64> = None;
    let mut prev_ratio = f64::INFINITY;
    let mut last_env = f64::NAN;

    for k in 0..accuracy.max_terms {
        let kf = k as f64;
        let arg = rho * kf + beta;
        let base = kf * ln_abs_z - ln_gamma(kf + 1.0);

        let (sign, ln_rg) = ln_abs_rgamma(arg);
        if sign != 0.0 {
            let exponent = base + ln_rg;
            let mut term = sign * exponent.exp();
            if negative && k % 2 == 1 {
                term = -term;
            }
            acc.add(term);
            abs_sum += term.abs();
            max_exponent = max_exponent.max(exponent.abs());
        }

        let env = (base + ln_rgamma_envelope(arg)).exp();
        last_env = env;
        if let Some(pe) = prev_env {
            let ratio = if pe > 0.0 { env / pe } else { 0.0 };
            if ratio < 1.0 && ratio <= prev_ratio && env < half_tol {
                let tail = env * ratio / (1.0 - ratio);
                if tail < half_tol {
                    return Ok(WrightValue {
                        value: acc.value(),
                        truncation_bound: tail,
                        rounding_bound: f64::EPSILON * abs_sum * (4.0 + max_exponent),
                        terms: k + 1,
                    });
                }
            }
            prev_ratio = ratio;
        }
        prev_env = Some(env);
    }
    Err(Error::NonConvergent {
        max_terms: accuracy.max_terms,
        last_term: last_env,
    })
}

/// Mainardi function M_ρ(x) = W(−x; −ρ; 1−ρ), 0 < ρ < 1.
pub fn mainardi(rho: f64, x: f64) -> Result<f64> {
    mainardi_with(rho, x, SeriesAccuracy::default())
}

pub fn mainardi_with(rho: f64, x: f64, accuracy: SeriesAccuracy) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(invalid(format!(
            "Mainardi function needs 0 < rho < 1, got {rho}"
        )));
    }
    WrightEval::new(-x, -rho, 1.0 - rho)
        .with_accuracy(accuracy)
        .eval()
}

/// W(−z; −ρ; β) for z ≥ 0, with 0 < ρ < 1 and β ≥ 0.
///
/// On this branch the function is positive and strictly decreasing in z.
/// For large z the alternating series cancels catastrophically: the largest
/// term grows roughly like the reciprocal of the value, so double precision
/// resolves the function only down to about √ε ≈ 1e-8. Once the rounding
/// estimate exceeds the computed value (or the series runs out of terms) the
/// value carries no significant digits and 0 is returned; the absolute
/// error is then below the value at the crossover.
pub fn wright_decaying(z: f64, rho: f64, beta: f64, accuracy: SeriesAccuracy) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(invalid(format!("wright_decaying needs z >= 0, got {z}")));
    }
    if !(rho > 0.0 && rho < 1.0 && beta >= 0.0) {
        return Err(invalid("wright_decaying needs 0 < rho < 1 and beta >= 0"));
    }
    match WrightEval::new(-z, -rho, beta)
        .with_accuracy(accuracy)
        .eval_detailed()
    {
        Ok(v) if v.value > 0.0 && v.rounding_bound <= v.value => Ok(v.value),
        Ok(_) | Err(Error::NonConvergent { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}
