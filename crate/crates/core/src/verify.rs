//! Batch verification sweeps.
//!
//! Each sweep produces a [`SweepReport`]: one row per grid point with the
//! computed values and the checks applied to that row. Rows are computed
//! independently (in parallel when enabled) and assembled in grid order, so
//! reports are deterministic.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::equations::{solve, RootKind, RootProblem};
use crate::error::{invalid, Result};
use crate::par::{self, Execution};
use crate::specfun::{erf, erfc, gamma, Alpha, SeriesAccuracy, WrightEval};
use crate::stefan::{SelfSimilarSolution, SolutionKind, SpaceTimePoint};

/// A single pass/fail comparison `observed ≤ bound` (or `<` when strict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub strict: bool,
    /// The bound is an empirically calibrated constant rather than an
    /// exact identity.
    pub calibrated: bool,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, observed: f64, bound: f64, strict: bool) -> Self {
        let pass = if strict {
            observed < bound
        } else {
            observed <= bound
        };
        Self {
            name: name.into(),
            observed,
            bound,
            strict,
            calibrated: false,
            pass,
        }
    }

    fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, bound, false)
    }

    fn below(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, bound, true)
    }

    fn calibrated(mut self) -> Self {
        self.calibrated = true;
        self
    }

    /// Signed violation; positive means failed (or on the boundary of a
    /// strict check).
    pub fn violation(&self) -> f64 {
        self.observed - self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub inputs: Vec<f64>,
    pub values: Vec<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Largest signed violation among the row's checks; `None` when the row
    /// carries no check.
    pub violation: Option<f64>,
}

impl SweepRow {
    fn new(inputs: Vec<f64>, values: Vec<f64>, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        let violation = checks.iter().map(Check::violation).reduce(f64::max);
        Self {
            inputs,
            values,
            checks,
            pass,
            violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    /// Human-readable description of the parameter grid.
    pub grid: String,
    pub input_columns: Vec<String>,
    pub value_columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    /// Maximum of the rows' signed violations.
    pub worst_violation: f64,
}

impl SweepReport {
    fn new(
        name: &str,
        grid: String,
        input_columns: &[&str],
        value_columns: &[&str],
        rows: Vec<SweepRow>,
    ) -> Self {
        let worst_violation = rows
            .iter()
            .filter_map(|r| r.violation)
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            name: name.to_string(),
            grid,
            input_columns: input_columns.iter().map(|s| s.to_string()).collect(),
            value_columns: value_columns.iter().map(|s| s.to_string()).collect(),
            rows,
            worst_violation,
        }
    }

    pub fn all_pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = (usize, &Check)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.checks.iter().filter(|c| !c.pass).map(move |c| (i, c)))
    }

    /// Values of one value column across all rows.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.value_columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }
}

/// `n` equispaced points on [a, b], endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn w(z: f64, rho: f64, beta: f64, acc: SeriesAccuracy) -> Result<f64> {
    WrightEval::new(z, rho, beta).with_accuracy(acc).eval()
}

fn check_alpha_ladder(alphas: &[f64], allow_one: bool) -> Result<()> {
    if alphas.is_empty() {
        return Err(invalid("alpha ladder is empty"));
    }
    for &a in alphas {
        let ok = a > 0.0 && (a < 1.0 || (allow_one && a == 1.0));
        if !ok {
            return Err(invalid(format!("alpha {a} outside the sweep range")));
        }
    }
    if alphas.windows(2).any(|p| p[1] <= p[0]) {
        return Err(invalid("alpha ladder must be strictly increasing"));
    }
    Ok(())
}

/// Default α ladder for the limit and convergence sweeps.
pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 0.75, 0.9, 0.99, 0.999];

// ---------------------------------------------------------------------------
// limits of the Wright functions as α ↗ 1

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSweepConfig {
    /// Strictly increasing; may end with 1.
    pub alphas: Vec<f64>,
    pub x_grid: Vec<f64>,
    /// Calibrated bound on every sup-norm gap at the largest α < 1.
    pub final_threshold: f64,
    /// Bound on the gaps at α = 1, where the identities are exact.
    pub exact_threshold: f64,
    /// Slack allowed when checking that gaps are nonincreasing in α.
    pub monotone_slack: f64,
    pub accuracy: SeriesAccuracy,
    pub execution: Execution,
}

impl Default for LimitSweepConfig {
    fn default() -> Self {
        Self {
            alphas: DEFAULT_ALPHAS.to_vec(),
            x_grid: linspace(0.0, 3.0, 301),
            final_threshold: 1e-2,
            exact_threshold: 1e-10,
            monotone_slack: 1e-12,
            accuracy: SeriesAccuracy::default(),
            execution: Execution::default(),
        }
    }
}

const LIMIT_COLUMNS: [&str; 4] = ["gap_mainardi", "gap_wright", "gap_erf", "gap_erfc"];

/// The four gaps at (α, x) between the Wright expressions and their α = 1
/// limits: M_{α/2}(2x), W(−2x,−α/2,α/2) against e^{−x²}/√π, and
/// 1 − W(−2x,−α/2,1), W(−2x,−α/2,1) against erf and erfc.
pub fn limit_gaps(alpha: f64, x: f64, acc: SeriesAccuracy) -> Result<[f64; 4]> {
    let h = 0.5 * alpha;
    let gauss = (-x * x).exp() / PI.sqrt();
    let w1 = w(-2.0 * x, -h, 1.0, acc)?;
    Ok([
        (w(-2.0 * x, -h, 1.0 - h, acc)? - gauss).abs(),
        (w(-2.0 * x, -h, h, acc)? - gauss).abs(),
        (1.0 - w1 - erf(x)).abs(),
        (w1 - erfc(x)).abs(),
    ])
}

/// Sup-norm limit gaps over `x_grid` for each α, with the default thresholds.
pub fn limit_sweep(alphas: &[f64], x_grid: &[f64]) -> Result<SweepReport> {
    limit_sweep_with(&LimitSweepConfig {
        alphas: alphas.to_vec(),
        x_grid: x_grid.to_vec(),
        ..Default::default()
    })
}

pub fn limit_sweep_with(cfg: &LimitSweepConfig) -> Result<SweepReport> {
    check_alpha_ladder(&cfg.alphas, true)?;
    if cfg.x_grid.is_empty() || cfg.x_grid.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(invalid("x grid must be nonempty and lie in [0, inf)"));
    }
    let nx = cfg.x_grid.len();
    let gaps = par::try_map_indices(cfg.alphas.len() * nx, cfg.execution, |k| {
        limit_gaps(cfg.alphas[k / nx], cfg.x_grid[k % nx], cfg.accuracy)
    })?;
    let sups: Vec<[f64; 4]> = gaps
        .chunks(nx)
        .map(|c| {
            c.iter().fold([0.0f64; 4], |mut acc, g| {
                for j in 0..4 {
                    acc[j] = acc[j].max(g[j]);
                }
                acc
            })
        })
        .collect();

    let final_fractional = cfg.alphas.iter().rposition(|&a| a < 1.0);
    let rows = cfg
        .alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut checks = Vec::new();
            for j in 0..4 {
                let col = LIMIT_COLUMNS[j];
                if a == 1.0 {
                    checks.push(Check::at_most(
                        format!("{col} exact"),
                        sups[i][j],
                        cfg.exact_threshold,
                    ));
                }
                if i > 0 {
                    checks.push(Check::at_most(
                        format!("{col} nonincreasing"),
                        sups[i][j],
                        sups[i - 1][j] + cfg.monotone_slack,
                    ));
                }
                if Some(i) == final_fractional {
                    checks.push(
                        Check::at_most(format!("{col} final"), sups[i][j], cfg.final_threshold)
                            .calibrated(),
                    );
                }
            }
            SweepRow::new(vec![a], sups[i].to_vec(), checks)
        })
        .collect();

    let (x0, x1) = (cfg.x_grid[0], cfg.x_grid[nx - 1]);
    Ok(SweepReport::new(
        "limits",
        format!("alpha in {:?}; {nx} x points on [{x0}, {x1}]", cfg.alphas),
        &["alpha"],
        &LIMIT_COLUMNS,
        rows,
    ))
}

// ---------------------------------------------------------------------------
// ordering Γ(δ)W(−x,−ρ,δ) < Γ(μ)W(−x,−ρ,μ)

/// Γ(β) W(−x, −ρ, β).
fn normalized_wright(x: f64, rho: f64, beta: f64, acc: SeriesAccuracy) -> Result<f64> {
    Ok(gamma(beta)? * w(-x, -rho, beta, acc)?)
}

/// Checks Γ(δ)W(−x,−ρ,δ) < Γ(μ)W(−x,−ρ,μ) at every x of the grid for each
/// tuple (ρ, μ, δ) with 0 < ρ ≤ μ < δ.
pub fn ordering_sweep(tuples: &[(f64, f64, f64)], x_grid: &[f64]) -> Result<SweepReport> {
    ordering_sweep_with(
        tuples,
        x_grid,
        SeriesAccuracy::default(),
        Execution::default(),
    )
}

pub fn ordering_sweep_with(
    tuples: &[(f64, f64, f64)],
    x_grid: &[f64],
    acc: SeriesAccuracy,
    exec: Execution,
) -> Result<SweepReport> {
    if tuples.is_empty() || x_grid.is_empty() {
        return Err(invalid("ordering sweep needs tuples and grid points"));
    }
    for &(rho, mu, delta) in tuples {
        if !(0.0 < rho && rho <= mu && mu < delta && rho < 1.0) {
            return Err(invalid(format!(
                "ordering tuple needs 0 < rho <= mu < delta, rho < 1; got ({rho}, {mu}, {delta})"
            )));
        }
    }
    if x_grid.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(invalid("ordering grid must be strictly positive"));
    }
    let nx = x_grid.len();
    let rows = par::try_map_indices(tuples.len() * nx, exec, |k| {
        let (rho, mu, delta) = tuples[k / nx];
        let x = x_grid[k % nx];
        let lhs = normalized_wright(x, rho, delta, acc)?;
        let rhs = normalized_wright(x, rho, mu, acc)?;
        Ok(SweepRow::new(
            vec![rho, mu, delta, x],
            vec![lhs, rhs],
            vec![Check::below("strict ordering", lhs - rhs, 0.0)],
        ))
    })?;
    Ok(SweepReport::new(
        "ordering",
        format!("{} tuples x {nx} points", tuples.len()),
        &["rho", "mu", "delta", "x"],
        &["gamma_delta_w", "gamma_mu_w"],
        rows,
    ))
}

/// The tuple (α/2, α/2, 1−α/2), which compares Γ(1−α/2)M_{α/2} with
/// Γ(α/2)W(·,−α/2,α/2).
pub fn remark_tuple(alpha: f64) -> (f64, f64, f64) {
    (0.5 * alpha, 0.5 * alpha, 1.0 - 0.5 * alpha)
}

// ---------------------------------------------------------------------------
// convergence of the fronts and profiles as α ↗ 1

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweepConfig {
    pub alphas: Vec<f64>,
    /// Bound on |η_α − η_1| and |ξ_α − η_1| at the largest α.
    pub final_threshold: f64,
    /// Slack for the monotone-decrease checks.
    pub monotone_slack: f64,
    /// Temperature comparison box: x ∈ [0, 0.9·min front], t ∈ [t_min, t_max].
    pub t_min: f64,
    pub t_max: f64,
    pub x_points: usize,
    pub t_points: usize,
    pub execution: Execution,
}

impl Default for ConvergenceSweepConfig {
    fn default() -> Self {
        Self {
            alphas: DEFAULT_ALPHAS.to_vec(),
            final_threshold: 5e-3,
            monotone_slack: 1e-12,
            t_min: 0.5,
            t_max: 2.0,
            x_points: 41,
            t_points: 16,
            execution: Execution::default(),
        }
    }
}

const CONVERGENCE_COLUMNS: [&str; 7] = [
    "eta",
    "xi",
    "eta_gap",
    "xi_gap",
    "xi_minus_eta",
    "sup_temp_gap_caputo",
    "sup_temp_gap_rl",
];

pub fn convergence_sweep(alphas: &[f64]) -> Result<SweepReport> {
    convergence_sweep_with(&ConvergenceSweepConfig {
        alphas: alphas.to_vec(),
        ..Default::default()
    })
}

pub fn convergence_sweep_with(cfg: &ConvergenceSweepConfig) -> Result<SweepReport> {
    check_alpha_ladder(&cfg.alphas, false)?;
    if !(cfg.t_min > 0.0 && cfg.t_min < cfg.t_max) || cfg.x_points < 2 || cfg.t_points < 2 {
        return Err(invalid(
            "convergence box needs 0 < t_min < t_max and >= 2 points per axis",
        ));
    }
    let classical = SelfSimilarSolution::classical()?;
    let eta1 = classical.coefficient().value;

    let pairs = par::try_map_indices(cfg.alphas.len(), cfg.execution, |i| {
        let a = Alpha::new(cfg.alphas[i])?;
        Ok::<_, crate::Error>((
            SelfSimilarSolution::new(SolutionKind::CaputoP1, a)?,
            SelfSimilarSolution::new(SolutionKind::RiemannLiouvilleP2, a)?,
        ))
    })?;

    // common box for every α so the sup gaps are comparable
    let min_front = pairs
        .iter()
        .flat_map(|(c, r)| [c.front(cfg.t_min), r.front(cfg.t_min)])
        .fold(classical.front(cfg.t_min), f64::min);
    let xs = linspace(0.0, 0.9 * min_front, cfg.x_points);
    let ts = linspace(cfg.t_min, cfg.t_max, cfg.t_points);
    let box_points: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (x, t)))
        .collect();

    let sup_gap = |sol: &SelfSimilarSolution| -> Result<f64> {
        let gaps = par::try_map_indices(box_points.len(), cfg.execution, |k| {
            let (x, t) = box_points[k];
            let p = SpaceTimePoint::new(x, t)?;
            Ok::<_, crate::Error>((sol.temperature(p)? - classical.temperature(p)?).abs())
        })?;
        Ok(gaps.into_iter().fold(0.0, f64::max))
    };

    let mut values = Vec::with_capacity(pairs.len());
    for (cap, rl) in &pairs {
        let (eta, xi) = (cap.coefficient().value, rl.coefficient().value);
        values.push(vec![
            eta,
            xi,
            (eta - eta1).abs(),
            (xi - eta1).abs(),
            xi - eta,
            sup_gap(cap)?,
            sup_gap(rl)?,
        ]);
    }

    let last = cfg.alphas.len() - 1;
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut checks = vec![Check::below("eta < xi", v[0] - v[1], 0.0)];
            if i > 0 {
                for j in [2, 3, 5, 6] {
                    checks.push(Check::at_most(
                        format!("{} decreasing", CONVERGENCE_COLUMNS[j]),
                        v[j],
                        values[i - 1][j] + cfg.monotone_slack,
                    ));
                }
            }
            if i == last {
                checks
                    .push(Check::at_most("eta_gap final", v[2], cfg.final_threshold).calibrated());
                checks.push(Check::at_most("xi_gap final", v[3], cfg.final_threshold).calibrated());
            }
            SweepRow::new(vec![cfg.alphas[i]], v.clone(), checks)
        })
        .collect();

    Ok(SweepReport::new(
        "convergence",
        format!(
            "alpha in {:?}; eta_1 = {eta1}; box x in [0, {}], t in [{}, {}] ({}x{} points)",
            cfg.alphas,
            0.9 * min_front,
            cfg.t_min,
            cfg.t_max,
            cfg.x_points,
            cfg.t_points
        ),
        &["alpha"],
        &CONVERGENCE_COLUMNS,
        rows,
    ))
}

// ---------------------------------------------------------------------------
// figure data

pub const FIGURE_COLUMNS: [&str; 3] = ["gamma_mainardi", "gamma_wright", "gaussian"];

/// The three curves Γ(1−α/2)M_{α/2}(2x), Γ(α/2)W(−2x,−α/2,α/2) and e^{−x²}
/// on `x_grid` (all x ≥ 0). The first curve must lie strictly below the
/// second for x > 0; at x = 0 all three equal 1.
pub fn figure_data(alpha: Alpha, x_grid: &[f64]) -> Result<SweepReport> {
    figure_data_with(
        alpha,
        x_grid,
        SeriesAccuracy::default(),
        Execution::default(),
    )
}

pub fn figure_data_with(
    alpha: Alpha,
    x_grid: &[f64],
    acc: SeriesAccuracy,
    exec: Execution,
) -> Result<SweepReport> {
    if alpha.is_classical() {
        return Err(invalid("figure data needs alpha < 1"));
    }
    if x_grid.is_empty() || x_grid.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(invalid("figure grid must be nonempty and lie in [0, inf)"));
    }
    let h = alpha.half();
    let rows = par::try_map_indices(x_grid.len(), exec, |i| {
        let x = x_grid[i];
        let c1 = normalized_wright(2.0 * x, h, 1.0 - h, acc)?;
        let c2 = normalized_wright(2.0 * x, h, h, acc)?;
        let g = (-x * x).exp();
        let checks = if x > 0.0 {
            vec![Check::below("mainardi below wright", c1 - c2, 0.0)]
        } else {
            let dev = (c1 - 1.0).abs().max((c2 - 1.0).abs()).max((g - 1.0).abs());
            vec![Check::at_most("equal at origin", dev, 1e-12)]
        };
        Ok::<_, crate::Error>(SweepRow::new(vec![x], vec![c1, c2, g], checks))
    })?;
    Ok(SweepReport::new(
        "figure",
        format!("alpha = {alpha}; {} x points", x_grid.len()),
        &["x"],
        &FIGURE_COLUMNS,
        rows,
    ))
}

/// Solves η_α and ξ_α for one α (shared by the CLI and the sweeps' tests).
pub fn front_pair(alpha: Alpha) -> Result<(f64, f64)> {
    let eta = solve(&RootProblem::new(RootKind::EtaFractional, Some(alpha))?)?;
    let xi = solve(&RootProblem::new(RootKind::XiFractional, Some(alpha))?)?;
    Ok((eta.value, xi.value))
}
