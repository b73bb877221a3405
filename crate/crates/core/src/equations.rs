//! Transcendental equations for the front coefficients and their solver.
//!
//! All residuals are written as LHS − RHS of the defining equation and are
//! negative just to the right of 0 (except [`eta0_residual`], which starts
//! positive); the solver does not depend on the orientation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::specfun::{erf, erfc, gamma, Alpha, SeriesAccuracy, WrightEval};

/// Smallest fractional order accepted by the fractional equations.
pub const MIN_ALPHA: f64 = 0.05;

/// Which front coefficient a root problem determines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    /// η_α, Caputo problem.
    EtaFractional,
    /// ξ_α, Riemann–Liouville-flux problem.
    XiFractional,
    /// η_1, classical Stefan problem.
    EtaClassical,
    /// η_0, the critical point of the classical fixed-point map.
    EtaZeroDeriv,
}

impl RootKind {
    pub fn is_classical(self) -> bool {
        matches!(self, RootKind::EtaClassical | RootKind::EtaZeroDeriv)
    }
}

fn w(z: f64, rho: f64, beta: f64, acc: SeriesAccuracy) -> Result<f64> {
    WrightEval::new(z, rho, beta).with_accuracy(acc).eval()
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "residual argument must be positive, got {x}"
        )))
    }
}

/// 2x[1 − W(−2x, −α/2, 1)], the left side shared by both fractional equations.
pub fn front_lhs(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    check_x(x)?;
    Ok(2.0 * x * (1.0 - w(-2.0 * x, -alpha.half(), 1.0, acc)?))
}

/// M_{α/2}(2x) Γ(1−α/2)/Γ(1+α/2), right side of the Caputo equation.
pub fn eta_rhs(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    check_x(x)?;
    let h = alpha.half();
    Ok(w(-2.0 * x, -h, 1.0 - h, acc)? * gamma(1.0 - h)? / gamma(1.0 + h)?)
}

/// (2/α) W(−2x, −α/2, α/2), right side of the reduced RL equation.
pub fn xi_rhs(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    check_x(x)?;
    let h = alpha.half();
    Ok(w(-2.0 * x, -h, h, acc)? / h)
}

/// Residual of the Caputo front equation at x (η_α is its root).
pub fn eta_residual(x: f64, alpha: Alpha) -> Result<f64> {
    eta_residual_with(x, alpha, SeriesAccuracy::default())
}

pub fn eta_residual_with(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    Ok(front_lhs(x, alpha, acc)? - eta_rhs(x, alpha, acc)?)
}

/// Residual of the RL front equation in reduced form (ξ_α is its root).
pub fn xi_residual(x: f64, alpha: Alpha) -> Result<f64> {
    xi_residual_with(x, alpha, SeriesAccuracy::default())
}

pub fn xi_residual_with(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    Ok(front_lhs(x, alpha, acc)? - xi_rhs(x, alpha, acc)?)
}

/// Residual of the RL front equation in its original form, with right side
/// 2x W(−2x, −α/2, 1) + W(−2x, −α/2, 1+α/2).
pub fn xi_residual_long(x: f64, alpha: Alpha) -> Result<f64> {
    xi_residual_long_with(x, alpha, SeriesAccuracy::default())
}

pub fn xi_residual_long_with(x: f64, alpha: Alpha, acc: SeriesAccuracy) -> Result<f64> {
    check_x(x)?;
    let h = alpha.half();
    let rhs = 2.0 * x * w(-2.0 * x, -h, 1.0, acc)? + w(-2.0 * x, -h, 1.0 + h, acc)?;
    Ok(front_lhs(x, alpha, acc)? - rhs)
}

/// x erf(x) − e^{−x²}/√π; η_1 is its unique positive root.
pub fn classical_residual(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(x * erf(x) - (-x * x).exp() / PI.sqrt())
}

/// √π x e^{x²} erfc(x) − 4x²; η_0 is its unique positive root.
pub fn eta0_residual(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(PI.sqrt() * x * (x * x).exp() * erfc(x) - 4.0 * x * x)
}

/// A bracketed root problem for one front coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootProblem {
    pub kind: RootKind,
    /// Ignored (and set to 1) for the classical kinds.
    pub alpha: Alpha,
    pub bracket: (f64, f64),
    pub tol: f64,
    pub accuracy: SeriesAccuracy,
    pub max_iterations: usize,
    /// How many times `hi` may be doubled looking for a sign change.
    pub max_widenings: usize,
}

impl RootProblem {
    pub const DEFAULT_BRACKET: (f64, f64) = (1e-4, 5.0);
    pub const DEFAULT_TOL: f64 = 1e-12;

    /// Problem with the default bracket and tolerances. `alpha` is required
    /// for the fractional kinds and ignored for the classical ones.
    pub fn new(kind: RootKind, alpha: Option<Alpha>) -> Result<Self> {
        let alpha = if kind.is_classical() {
            Alpha::ONE
        } else {
            let a = alpha.ok_or_else(|| invalid(format!("{kind:?} requires alpha")))?;
            if a.value() <= MIN_ALPHA || a.value() >= 1.0 {
                return Err(invalid(format!(
                    "fractional front equations need {MIN_ALPHA} < alpha < 1, got {a}"
                )));
            }
            a
        };
        Ok(Self {
            kind,
            alpha,
            bracket: Self::DEFAULT_BRACKET,
            tol: Self::DEFAULT_TOL,
            accuracy: SeriesAccuracy::default(),
            max_iterations: 400,
            max_widenings: 4,
        })
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = (lo, hi);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_accuracy(mut self, accuracy: SeriesAccuracy) -> Self {
        self.accuracy = accuracy;
        self
    }

    pub fn residual(&self, x: f64) -> Result<f64> {
        match self.kind {
            RootKind::EtaFractional => eta_residual_with(x, self.alpha, self.accuracy),
            RootKind::XiFractional => xi_residual_with(x, self.alpha, self.accuracy),
            RootKind::EtaClassical => classical_residual(x),
            RootKind::EtaZeroDeriv => eta0_residual(x),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket;
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return Err(invalid(format!(
                "bracket must satisfy 0 <= lo < hi, got ({lo}, {hi})"
            )));
        }
        if !(self.tol > 0.0) {
            return Err(invalid(format!(
                "solver tol must be positive, got {}",
                self.tol
            )));
        }
        self.accuracy.validate()
    }
}

/// A solved front coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontCoefficient {
    pub kind: RootKind,
    pub alpha: Alpha,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Bracket in which the sign change was found (after any widening).
    pub bracket: (f64, f64),
}

/// Solves a [`RootProblem`] by bisection with secant (Illinois-weighted
/// regula falsi) acceleration.
///
/// Secant steps are accepted only while they shrink the bracket by at least
/// half per two iterations; otherwise the step falls back to bisection. The
/// loop stops when the bracket width is ≤ tol and the residual at the
/// returned point is ≤ tol, or when the residual is exactly zero.
pub fn solve(p: &RootProblem) -> Result<FrontCoefficient> {
    p.validate()?;
    let (mut lo, mut hi) = p.bracket;
    if lo == 0.0 {
        lo = f64::MIN_POSITIVE.sqrt();
    }
    let mut f_lo = p.residual(lo)?;
    let mut f_hi = p.residual(hi)?;
    let mut widenings = 0;
    while f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        if widenings == p.max_widenings {
            return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
        }
        widenings += 1;
        hi *= 2.0;
        f_hi = p.residual(hi)?;
    }
    let found = (lo, hi);
    let done = |x: f64, fx: f64, iterations: usize| FrontCoefficient {
        kind: p.kind,
        alpha: p.alpha,
        value: x,
        residual: fx,
        iterations,
        bracket: found,
    };
    if f_lo == 0.0 {
        return Ok(done(lo, 0.0, 0));
    }
    if f_hi == 0.0 {
        return Ok(done(hi, 0.0, 0));
    }

    // Illinois: halve the stale endpoint's weight when the same side is kept
    let mut side = 0i8;
    let mut width_two_back = hi - lo;
    let mut width_one_back = hi - lo;
    for it in 1..=p.max_iterations {
        let width = hi - lo;
        let secant_ok = width <= 0.5 * width_two_back || it <= 2;
        let mut x = if secant_ok {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        } else {
            0.5 * (lo + hi)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = p.residual(x)?;
        if fx == 0.0 {
            return Ok(done(x, fx, it));
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        width_two_back = width_one_back;
        width_one_back = width;

        if hi - lo <= p.tol {
            // report the endpoint with the smaller true residual
            let r_lo = p.residual(lo)?;
            let r_hi = p.residual(hi)?;
            let (x, r) = if r_lo.abs() <= r_hi.abs() {
                (lo, r_lo)
            } else {
                (hi, r_hi)
            };
            if r.abs() <= p.tol {
                return Ok(done(x, r, it));
            }
        }
    }
    Err(Error::MaxIterations {
        iterations: p.max_iterations,
        width: hi - lo,
    })
}

/// Number of sign changes of `residual` over `samples` equispaced points on
/// (0, x_max] (the point 0 itself is excluded).
pub fn count_sign_changes(
    residual: impl Fn(f64) -> Result<f64>,
    x_max: f64,
    samples: usize,
) -> Result<usize> {
    let mut changes = 0;
    let mut prev: Option<f64> = None;
    for i in 1..=samples {
        let r = residual(x_max * i as f64 / samples as f64)?;
        if let Some(p) = prev {
            if (p < 0.0 && r >= 0.0) || (p > 0.0 && r <= 0.0) {
                changes += 1;
            }
        }
        if r != 0.0 {
            prev = Some(r);
        }
    }
    Ok(changes)
}
