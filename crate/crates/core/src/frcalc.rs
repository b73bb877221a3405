//! Quadrature for fractional operators on uniform grids.
//!
//! These routines only see sampled values, never closed forms, so they can
//! check identities and PDE residuals independently of [`crate::specfun`].
//!
//! * Riemann–Liouville integral: product integration, f piecewise linear and
//!   the kernel (t−τ)^{β−1} integrated exactly on each subinterval.
//! * Caputo derivative: the L1 scheme (piecewise-linear f, exact kernel
//!   moments against each constant slope).
//! * Riemann–Liouville derivative: d/dt of the product-integrated
//!   I^{1−μ} f, via a one-sided second-order difference.

use crate::error::{invalid, Error, Result};
use crate::par::{self, Execution};
use crate::specfun::{gamma, Alpha};

/// Samples f(t_j), t_j = j·t_end/n, j = 0..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    t_end: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(t_end: f64, values: Vec<f64>) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(invalid(format!("t_end must be positive, got {t_end}")));
        }
        if values.len() < 3 {
            return Err(invalid(format!(
                "need at least 2 intervals, got {} samples",
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {j} is not finite")));
        }
        Ok(Self { t_end, values })
    }

    /// Samples `f` on `n` uniform intervals of [0, t_end].
    pub fn from_fn<F>(t_end: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        Self::from_fn_with(Execution::default(), t_end, n, f)
    }

    pub fn from_fn_with<F>(exec: Execution, t_end: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let h = t_end / n as f64;
        Self::new(t_end, par::map_indices(n + 1, exec, |j| f(j as f64 * h)))
    }

    /// Fallible sampler; the first failing sample (in grid order) is returned.
    pub fn try_from_fn<F>(exec: Execution, t_end: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync + Send,
    {
        let h = t_end / n as f64;
        Self::new(
            t_end,
            par::try_map_indices(n + 1, exec, |j| f(j as f64 * h))?,
        )
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.n() as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_index(&self, at: usize) -> Result<()> {
        if at == 0 || at > self.n() {
            return Err(invalid(format!("grid index {at} outside 1..={}", self.n())));
        }
        Ok(())
    }
}

fn check_order(name: &str, v: f64, upper_inclusive: bool) -> Result<()> {
    let ok = v > 0.0 && if upper_inclusive { v <= 1.0 } else { v < 1.0 };
    if ok {
        Ok(())
    } else {
        let bracket = if upper_inclusive { "(0, 1]" } else { "(0, 1)" };
        Err(invalid(format!("{name} must lie in {bracket}, got {v}")))
    }
}

/// Powers k^{β+1} and k^β for k = 0..=n, shared by the product weights.
struct PowerTable {
    beta: f64,
    p1: Vec<f64>,
    p0: Vec<f64>,
}

impl PowerTable {
    fn new(beta: f64, n: usize) -> Self {
        let p1 = (0..=n).map(|k| (k as f64).powf(beta + 1.0)).collect();
        let p0 = (0..=n).map(|k| (k as f64).powf(beta)).collect();
        Self { beta, p1, p0 }
    }

    /// Σ_j a_j f_j for node m, without the h^β/Γ(β+2) prefactor.
    fn weighted_sum(&self, values: &[f64], m: usize) -> f64 {
        let pw = &self.p1;
        let mf = m as f64;
        let mut s = (pw[m - 1] - (mf - self.beta - 1.0) * self.p0[m]) * values[0];
        for (j, f) in values.iter().enumerate().take(m).skip(1) {
            let r = m - j;
            s += (pw[r + 1] - 2.0 * pw[r] + pw[r - 1]) * f;
        }
        s + values[m]
    }
}

fn rl_integral_unchecked(table: &PowerTable, values: &[f64], h: f64, at: usize) -> f64 {
    let beta = table.beta;
    let scale = h.powf(beta) / gamma(beta + 2.0).expect("beta + 2 > 0");
    scale * table.weighted_sum(values, at)
}

/// ₀I^β f evaluated at t_at.
pub fn rl_integral(f: &SampledFunction, beta: f64, at: usize) -> Result<f64> {
    check_order("beta", beta, true)?;
    f.check_index(at)?;
    if at == 0 {
        return Ok(0.0);
    }
    let table = PowerTable::new(beta, at);
    Ok(rl_integral_unchecked(&table, &f.values, f.step(), at))
}

/// ₀I^β f at every node (node 0 is 0).
pub fn rl_integral_nodes(f: &SampledFunction, beta: f64) -> Result<SampledFunction> {
    rl_integral_nodes_with(Execution::default(), f, beta)
}

pub fn rl_integral_nodes_with(
    exec: Execution,
    f: &SampledFunction,
    beta: f64,
) -> Result<SampledFunction> {
    check_order("beta", beta, true)?;
    let h = f.step();
    let table = PowerTable::new(beta, f.n());
    let values = par::map_indices(f.n() + 1, exec, |m| {
        if m == 0 {
            0.0
        } else {
            rl_integral_unchecked(&table, &f.values, h, m)
        }
    });
    SampledFunction::new(f.t_end, values)
}

/// ₀I^β [τ^p g(τ)] at t_at for an integrand singular at the origin
/// (−1 < p < 0) with smooth `g`.
///
/// On [h, t_at] the product τ^p g(τ) is treated as piecewise linear. On the
/// first subinterval the smooth factor (t−τ)^{β−1} g(τ) is replaced by the
/// line through its values at 0 and h, with g(0) linearly extrapolated from
/// g(h), g(2h), and integrated against the exact moments of τ^p; the sample
/// g(0) is never read.
pub fn rl_integral_singular(g: &SampledFunction, power: f64, beta: f64, at: usize) -> Result<f64> {
    check_order("beta", beta, true)?;
    g.check_index(at)?;
    if !(power > -1.0) {
        return Err(invalid(format!(
            "endpoint power must exceed -1, got {power}"
        )));
    }
    if at < 2 {
        return Err(Error::NeedsMoreGrid(
            "singular endpoint treatment needs at >= 2".into(),
        ));
    }
    let h = g.step();
    let t = at as f64 * h;
    let gv = &g.values;

    // subintervals [t_j, t_{j+1}] for j ≥ 1: exact kernel moments against
    // the linear interpolant of τ^p g(τ)
    let p = beta + 1.0;
    let mut tail = 0.0;
    for j in 1..at {
        let fa = (j as f64 * h).powf(power) * gv[j];
        let fb = ((j + 1) as f64 * h).powf(power) * gv[j + 1];
        // distances to t measured in steps
        let a = (at - j) as f64;
        let b = a - 1.0;
        // ∫ (t−τ)^{β−1} ℓ_j(τ) dτ where ℓ_j is the hat segment
        let m0 = (a.powf(beta) - b.powf(beta)) / beta;
        let m1 = (a.powf(p) - b.powf(p)) / p; // ∫ (t−τ)^β / h
                                              // weight on fb: ∫ (τ − t_j)/h · k = a·m0 − m1; on fa: m0 − that
        let wb = a * m0 - m1;
        let wa = m0 - wb;
        tail += wa * fa + wb * fb;
    }
    tail *= h.powf(beta);

    let g0 = 2.0 * gv[1] - gv[2];
    let phi0 = t.powf(beta - 1.0) * g0;
    let phi1 = (t - h).powf(beta - 1.0) * gv[1];
    // ∫₀^h τ^p [phi0 + (phi1 − phi0) τ/h] dτ
    let mom0 = h.powf(power + 1.0) / (power + 1.0);
    let mom1 = h.powf(power + 1.0) / (power + 2.0);
    let head = phi0 * mom0 + (phi1 - phi0) * mom1;

    Ok((head + tail) / gamma(beta).expect("beta > 0"))
}

/// Caputo derivative ᶜD^α f at t_at (L1 scheme).
pub fn caputo_derivative(f: &SampledFunction, alpha: Alpha, at: usize) -> Result<f64> {
    check_order("alpha", alpha.value(), false)?;
    f.check_index(at)?;
    let a = alpha.value();
    let q = 1.0 - a;
    let h = f.step();
    let v = &f.values;
    let s: f64 = (1..=at)
        .map(|j| {
            let i = (at - j) as f64;
            let b = (i + 1.0).powf(q) - i.powf(q);
            b * (v[j] - v[j - 1])
        })
        .sum();
    Ok(s * h.powf(-a) / gamma(2.0 - a).expect("2 - alpha > 0"))
}

/// Riemann–Liouville derivative ᴿᴸD^μ f = d/dt ₀I^{1−μ} f at t_at.
pub fn rl_derivative(f: &SampledFunction, order: f64, at: usize) -> Result<f64> {
    check_order("order", order, false)?;
    f.check_index(at)?;
    if at < 2 {
        return Err(Error::NeedsMoreGrid(format!(
            "RL derivative stencil needs at >= 2, got {at}"
        )));
    }
    let beta = 1.0 - order;
    let h = f.step();
    let table = PowerTable::new(beta, at);
    let big = |m: usize| {
        if m == 0 {
            0.0
        } else {
            rl_integral_unchecked(&table, &f.values, h, m)
        }
    };
    Ok((3.0 * big(at) - 4.0 * big(at - 1) + big(at - 2)) / (2.0 * h))
}
