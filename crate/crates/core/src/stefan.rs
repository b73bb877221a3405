//! Closed-form self-similar solutions of the one-phase Stefan problems.
//!
//! With z = x t^{−α/2} and front coefficient c, both fractional problems
//! share the profile
//!
//! ```text
//! u(x,t) = 1 − [1 − W(−z, −α/2, 1)] / [1 − W(−2c, −α/2, 1)],   s(t) = 2c t^{α/2},
//! ```
//!
//! and differ only in c: η_α for the Caputo problem, ξ_α for the problem
//! with the Riemann–Liouville flux. The classical solution is
//! u = 1 − erf(x/2√t)/erf(η_1), s = 2η_1√t.
//!
//! The profile formulas extend analytically past the front (x > s(t)); the
//! residual checks, which need u(x, τ) at fixed x for all τ ∈ [0, t], use
//! that extension.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::equations::{solve, FrontCoefficient, RootKind, RootProblem};
use crate::error::{invalid, Error, Result};
use crate::frcalc::{caputo_derivative, rl_derivative, SampledFunction};
use crate::par::Execution;
use crate::specfun::{erf, gamma, wright_decaying, Alpha, SeriesAccuracy, WrightEval};

/// Which of the three closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolutionKind {
    /// Caputo time derivative in the heat equation and the Stefan condition.
    CaputoP1,
    /// Riemann–Liouville flux in the heat balance and the Stefan condition.
    RiemannLiouvilleP2,
    /// The classical (α = 1) Stefan problem.
    Classical,
}

impl SolutionKind {
    pub fn root_kind(self) -> RootKind {
        match self {
            SolutionKind::CaputoP1 => RootKind::EtaFractional,
            SolutionKind::RiemannLiouvilleP2 => RootKind::XiFractional,
            SolutionKind::Classical => RootKind::EtaClassical,
        }
    }
}

/// A point (x, t) with x ≥ 0, t > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(invalid(format!("x must be >= 0, got {x}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("t must be > 0, got {t}")));
        }
        Ok(Self { x, t })
    }
}

/// Tighter series tolerance for finite-difference stencils, where the
/// truncation error is divided by h².
const STENCIL_ACCURACY: SeriesAccuracy = SeriesAccuracy {
    tol: 1e-15,
    max_terms: 2000,
};

/// One of the explicit solutions, with its front coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSolution {
    kind: SolutionKind,
    alpha: Alpha,
    coefficient: FrontCoefficient,
    /// 1/(1 − W(−2c, −α/2, 1)), or 1/erf(η_1) for the classical solution.
    scale: f64,
}

impl SelfSimilarSolution {
    /// Solves the front equation with default settings and builds the solution.
    pub fn new(kind: SolutionKind, alpha: Alpha) -> Result<Self> {
        let alpha = if kind == SolutionKind::Classical {
            Alpha::ONE
        } else {
            alpha
        };
        let coefficient = solve(&RootProblem::new(kind.root_kind(), Some(alpha))?)?;
        Self::from_coefficient(kind, coefficient)
    }

    pub fn classical() -> Result<Self> {
        Self::new(SolutionKind::Classical, Alpha::ONE)
    }

    /// Builds a solution from an already solved coefficient.
    pub fn from_coefficient(kind: SolutionKind, coefficient: FrontCoefficient) -> Result<Self> {
        if coefficient.kind != kind.root_kind() {
            return Err(invalid(format!(
                "{kind:?} needs a {:?} coefficient, got {:?}",
                kind.root_kind(),
                coefficient.kind
            )));
        }
        if !(coefficient.value > 0.0) {
            return Err(invalid("front coefficient must be positive"));
        }
        let alpha = coefficient.alpha;
        if (kind == SolutionKind::Classical) != alpha.is_classical() {
            return Err(invalid(format!(
                "{kind:?} is incompatible with alpha = {alpha}"
            )));
        }
        let c = coefficient.value;
        let scale = match kind {
            SolutionKind::Classical => 1.0 / erf(c),
            _ => 1.0 / (1.0 - WrightEval::new(-2.0 * c, -alpha.half(), 1.0).eval()?),
        };
        Ok(Self {
            kind,
            alpha,
            coefficient,
            scale,
        })
    }

    pub fn kind(&self) -> SolutionKind {
        self.kind
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn coefficient(&self) -> &FrontCoefficient {
        &self.coefficient
    }

    /// s(t) = 2c t^{α/2}.
    pub fn front(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        2.0 * self.coefficient.value * t.powf(self.alpha.half())
    }

    /// s′(t) = α c t^{α/2 − 1}.
    pub fn front_velocity(&self, t: f64) -> f64 {
        self.alpha.value() * self.coefficient.value * t.powf(self.alpha.half() - 1.0)
    }

    fn check_domain(&self, p: SpaceTimePoint) -> Result<()> {
        let s = self.front(p.t);
        if p.x > s * (1.0 + 4.0 * f64::EPSILON) {
            return Err(Error::OutOfDomain { x: p.x, front: s });
        }
        Ok(())
    }

    /// Temperature u(x, t) for 0 ≤ x ≤ s(t).
    pub fn temperature(&self, p: SpaceTimePoint) -> Result<f64> {
        self.check_domain(p)?;
        self.temperature_with(p.x, p.t, SeriesAccuracy::default())
    }

    /// ∂u/∂x for 0 ≤ x ≤ s(t); negative throughout.
    pub fn flux(&self, p: SpaceTimePoint) -> Result<f64> {
        self.check_domain(p)?;
        self.flux_with(p.x, p.t, SeriesAccuracy::default())
    }

    /// Temperature formula continued to any x ≥ 0, t ≥ 0 (t = 0 gives the
    /// limit value).
    pub fn temperature_extended(&self, x: f64, t: f64) -> Result<f64> {
        self.temperature_with(x, t, SeriesAccuracy::default())
    }

    /// Flux formula continued to any x ≥ 0, t ≥ 0 (zero at t = 0).
    pub fn flux_extended(&self, x: f64, t: f64) -> Result<f64> {
        self.flux_with(x, t, SeriesAccuracy::default())
    }

    fn temperature_with(&self, x: f64, t: f64, acc: SeriesAccuracy) -> Result<f64> {
        if x == 0.0 {
            return Ok(1.0);
        }
        match self.kind {
            SolutionKind::Classical => {
                if t == 0.0 {
                    return Ok(1.0 - self.scale);
                }
                Ok(1.0 - self.scale * erf(x / (2.0 * t.sqrt())))
            }
            _ => {
                let decay = if t == 0.0 {
                    0.0
                } else {
                    let z = x * t.powf(-self.alpha.half());
                    wright_decaying(z, self.alpha.half(), 1.0, acc)?
                };
                Ok(1.0 - self.scale * (1.0 - decay))
            }
        }
    }

    fn flux_with(&self, x: f64, t: f64, acc: SeriesAccuracy) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        match self.kind {
            SolutionKind::Classical => {
                Ok(-self.scale * (-x * x / (4.0 * t)).exp() / (PI * t).sqrt())
            }
            _ => {
                let h = self.alpha.half();
                let tp = t.powf(-h);
                Ok(-self.scale * tp * wright_decaying(x * tp, h, 1.0 - h, acc)?)
            }
        }
    }

    /// Five-point second difference of the temperature in x.
    fn temperature_xx(&self, x: f64, t: f64) -> Result<f64> {
        let h = 1e-3_f64.min(0.25 * x);
        let u = |dx: f64| self.temperature_with(x + dx, t, STENCIL_ACCURACY);
        Ok(
            (-u(-2.0 * h)? + 16.0 * u(-h)? - 30.0 * u(0.0)? + 16.0 * u(h)? - u(2.0 * h)?)
                / (12.0 * h * h),
        )
    }

    /// Five-point first difference of the temperature in t.
    fn temperature_t(&self, x: f64, t: f64) -> Result<f64> {
        let h = 1e-3 * t;
        let u = |dt: f64| self.temperature_with(x, t + dt, STENCIL_ACCURACY);
        Ok((u(-2.0 * h)? - 8.0 * u(-h)? + 8.0 * u(h)? - u(2.0 * h)?) / (12.0 * h))
    }
}

/// Earliest time at which the residual checks may be evaluated.
pub const MIN_RESIDUAL_TIME: f64 = 0.25;

fn check_residual_point(sol: &SelfSimilarSolution, p: SpaceTimePoint, grid_n: usize) -> Result<()> {
    if p.t < MIN_RESIDUAL_TIME {
        return Err(invalid(format!(
            "residual checks need t >= {MIN_RESIDUAL_TIME}, got {}",
            p.t
        )));
    }
    if !(p.x > 0.0) || p.x >= sol.front(p.t) {
        return Err(Error::OutOfDomain {
            x: p.x,
            front: sol.front(p.t),
        });
    }
    if grid_n < 2 {
        return Err(Error::NeedsMoreGrid(format!("grid_n = {grid_n} < 2")));
    }
    Ok(())
}

/// |ᶜD^α_t u(x,t) − u_xx(x,t)| at an interior point.
///
/// The Caputo derivative comes from the L1 scheme applied to u(x, ·) sampled
/// on `grid_n` intervals of [0, t]; u_xx from a finite difference in x. For
/// the classical solution the time derivative is a plain finite difference.
/// Both fractional solutions share the profile shape, so either fractional
/// kind is accepted.
pub fn pde_residual_caputo(
    sol: &SelfSimilarSolution,
    p: SpaceTimePoint,
    grid_n: usize,
) -> Result<f64> {
    check_residual_point(sol, p, grid_n)?;
    let uxx = sol.temperature_xx(p.x, p.t)?;
    let lhs = match sol.kind {
        SolutionKind::Classical => sol.temperature_t(p.x, p.t)?,
        _ => {
            let samples = SampledFunction::try_from_fn(Execution::default(), p.t, grid_n, |tau| {
                sol.temperature_extended(p.x, tau)
            })?;
            caputo_derivative(&samples, sol.alpha, grid_n)?
        }
    };
    Ok((lhs - uxx).abs())
}

/// |ᶜD^α s(t) + u_x(s(t), t)| using the exact power rule for the front,
/// ᶜD^α(2c t^{α/2}) = 2c Γ(1+α/2)/Γ(1−α/2) t^{−α/2}; at α = 1 this is s′(t).
pub fn stefan_condition_residual_caputo(sol: &SelfSimilarSolution, t: f64) -> Result<f64> {
    let p = SpaceTimePoint::new(sol.front(t), t)?;
    let h = sol.alpha.half();
    let caputo_front = 2.0 * sol.coefficient.value * gamma(1.0 + h)? / gamma(1.0 - h)? * t.powf(-h);
    Ok((caputo_front + sol.flux(p)?).abs())
}

/// Configuration of the Riemann–Liouville Stefan-condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlConditionCheck {
    pub t: f64,
    pub grid_n: usize,
    /// Strictly decreasing offsets ε > 0; the flux is sampled at x = s(t) − ε.
    pub offsets: Vec<f64>,
    /// Order α of the operator ᴿᴸD^{1−α}; defaults to the solution's α and
    /// must be given for the classical solution.
    pub operator_alpha: Option<Alpha>,
    pub execution: Execution,
}

impl RlConditionCheck {
    /// Offsets given as fractions of s(t), e.g. `[0.2, 0.1, 0.05]`.
    pub fn with_relative_offsets(
        sol: &SelfSimilarSolution,
        t: f64,
        grid_n: usize,
        fractions: &[f64],
    ) -> Self {
        let s = sol.front(t);
        Self {
            t,
            grid_n,
            offsets: fractions.iter().map(|f| f * s).collect(),
            operator_alpha: None,
            execution: Execution::default(),
        }
    }

    pub fn with_operator_alpha(mut self, alpha: Alpha) -> Self {
        self.operator_alpha = Some(alpha);
        self
    }
}

/// Outcome of the Riemann–Liouville Stefan-condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlConditionReport {
    /// ᴿᴸD^{1−α} u_x at each x = s(t) − ε.
    pub values: Vec<f64>,
    /// Successive polynomial extrapolations to ε = 0.
    pub estimates: Vec<f64>,
    pub limit: f64,
    pub front_velocity: f64,
    /// |s′(t) + limit|.
    pub residual: f64,
}

/// Neville extrapolation to 0; returns the diagonal P_{0..k}(0), k = 0, 1, …
fn extrapolate_to_zero(points: &[f64], values: &[f64]) -> Vec<f64> {
    let mut table = values.to_vec();
    let mut diag = vec![values[0]];
    for k in 1..points.len() {
        for i in (k..points.len()).rev() {
            let (xi, xk) = (points[i], points[i - k]);
            table[i] = (xi * table[i - 1] - xk * table[i]) / (xi - xk);
        }
        diag.push(table[k]);
    }
    diag
}

/// Checks s′(t) = −ᴿᴸD^{1−α} u_x(x,t)|_{x→s(t)}.
///
/// At each x = s(t) − ε the map τ ↦ u_x(x, τ) is sampled on [0, t] with the
/// closed-form gradient (which is defined for all τ > 0 and vanishes as
/// τ → 0), the RL derivative is taken numerically, and the values are
/// extrapolated to ε = 0.
pub fn stefan_condition_residual_rl(
    sol: &SelfSimilarSolution,
    check: &RlConditionCheck,
) -> Result<RlConditionReport> {
    let t = check.t;
    if t < MIN_RESIDUAL_TIME {
        return Err(invalid(format!(
            "RL check needs t >= {MIN_RESIDUAL_TIME}, got {t}"
        )));
    }
    if check.grid_n < 2 {
        return Err(Error::NeedsMoreGrid(format!(
            "grid_n = {} < 2",
            check.grid_n
        )));
    }
    let op_alpha = check.operator_alpha.unwrap_or(sol.alpha);
    if op_alpha.is_classical() {
        return Err(invalid(
            "RL check needs an operator order alpha < 1 (set operator_alpha)",
        ));
    }
    let s = sol.front(t);
    let eps = &check.offsets;
    if eps.is_empty()
        || eps.iter().any(|&e| !(e > 0.0 && e < s))
        || eps.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(invalid(format!(
            "offsets must be strictly decreasing values in (0, s(t) = {s})"
        )));
    }

    let mut values = Vec::with_capacity(eps.len());
    for &e in eps {
        let x = s - e;
        let g = SampledFunction::try_from_fn(check.execution, t, check.grid_n, |tau| {
            sol.flux_extended(x, tau)
        })?;
        values.push(rl_derivative(&g, 1.0 - op_alpha.value(), check.grid_n)?);
    }
    let estimates = extrapolate_to_zero(eps, &values);
    if estimates.iter().any(|v| !v.is_finite()) {
        return Err(Error::ExtrapolationUnstable { estimates });
    }
    let k = estimates.len();
    if k >= 3 {
        let last = (estimates[k - 1] - estimates[k - 2]).abs();
        let prev = (estimates[k - 2] - estimates[k - 3]).abs();
        if last > prev && last > 1e-6 * (1.0 + estimates[k - 1].abs()) {
            return Err(Error::ExtrapolationUnstable { estimates });
        }
    }
    let limit = estimates[k - 1];
    let front_velocity = sol.front_velocity(t);
    Ok(RlConditionReport {
        values,
        estimates,
        limit,
        front_velocity,
        residual: (front_velocity + limit).abs(),
    })
}
