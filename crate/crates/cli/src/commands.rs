use fracstefan::equations::{solve, FrontCoefficient, RootKind, RootProblem};
use fracstefan::specfun::{self, Alpha, SeriesAccuracy, WrightEval};
use fracstefan::stefan::{
    pde_residual_caputo, stefan_condition_residual_caputo, stefan_condition_residual_rl,
    RlConditionCheck, SelfSimilarSolution, SolutionKind, SpaceTimePoint,
};
use fracstefan::verify::{self, linspace, ConvergenceSweepConfig, LimitSweepConfig, SweepReport};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{Cell, Report};
use crate::CliError;

/// A rendered report plus whether its checks passed.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, pass: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalFunction {
    Wright,
    Mainardi,
    Erf,
    Erfc,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolveKind {
    Eta,
    Xi,
    Classical,
    Eta0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProfileKind {
    Caputo,
    Rl,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ResidualKind {
    Pde,
    StefanCaputo,
    StefanRl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepName {
    Limits,
    Ordering,
    Convergence,
    Figure,
}

fn accuracy(cfg: &RunConfig) -> Result<SeriesAccuracy, CliError> {
    Ok(SeriesAccuracy::new(cfg.series_tol, cfg.series_max_terms)?)
}

fn required_alpha(cfg: &RunConfig) -> Result<Alpha, CliError> {
    let v = cfg
        .alpha
        .ok_or_else(|| CliError::Usage("this command needs --alpha".into()))?;
    Ok(Alpha::new(v)?)
}

fn point(x: f64, t: f64) -> Result<SpaceTimePoint, CliError> {
    Ok(SpaceTimePoint::new(x, t)?)
}

// ---------------------------------------------------------------------------

pub fn eval(cfg: &RunConfig, f: EvalFunction, args: &[f64]) -> Result<Outcome, CliError> {
    let arity = match f {
        EvalFunction::Wright => 3,
        EvalFunction::Mainardi => 2,
        _ => 1,
    };
    if args.len() != arity {
        return Err(CliError::Usage(format!(
            "{f:?} takes {arity} argument(s), got {}",
            args.len()
        )));
    }
    let acc = SeriesAccuracy::new(cfg.eval_tol, cfg.series_max_terms)?;
    let series = |z: f64, rho: f64, beta: f64| {
        WrightEval::new(z, rho, beta)
            .with_accuracy(acc)
            .eval_detailed()
    };
    let detailed = match f {
        EvalFunction::Wright => Some(series(args[0], args[1], args[2])?),
        EvalFunction::Mainardi => {
            let (rho, x) = (args[0], args[1]);
            specfun::mainardi_with(rho, x, acc)?;
            Some(series(-x, -rho, 1.0 - rho)?)
        }
        _ => None,
    };
    let mut fields: Vec<(&str, Cell)> = Vec::new();
    match detailed {
        Some(d) => {
            fields.push(("value", d.value.into()));
            fields.push(("truncation_bound", d.truncation_bound.into()));
            fields.push(("rounding_bound", d.rounding_bound.into()));
            fields.push(("terms", d.terms.into()));
        }
        None => {
            let x = args[0];
            let v = match f {
                EvalFunction::Erf => specfun::erf(x),
                EvalFunction::Erfc => specfun::erfc(x),
                _ => specfun::gamma(x)?,
            };
            fields.push(("value", v.into()));
        }
    }
    Ok(Outcome::ok(Report::record("fracstefan.eval/1", fields)))
}

// ---------------------------------------------------------------------------

fn root_problem(cfg: &RunConfig, kind: RootKind) -> Result<RootProblem, CliError> {
    let alpha = if kind.is_classical() {
        None
    } else {
        Some(required_alpha(cfg)?)
    };
    Ok(RootProblem::new(kind, alpha)?
        .with_bracket(cfg.bracket_lo, cfg.bracket_hi)
        .with_tol(cfg.solver_tol)
        .with_accuracy(accuracy(cfg)?))
}

fn coefficient(cfg: &RunConfig, kind: RootKind) -> Result<FrontCoefficient, CliError> {
    Ok(solve(&root_problem(cfg, kind)?)?)
}

pub fn solve_front(cfg: &RunConfig, kind: SolveKind) -> Result<Outcome, CliError> {
    let (name, root) = match kind {
        SolveKind::Eta => ("eta", RootKind::EtaFractional),
        SolveKind::Xi => ("xi", RootKind::XiFractional),
        SolveKind::Classical => ("classical", RootKind::EtaClassical),
        SolveKind::Eta0 => ("eta0", RootKind::EtaZeroDeriv),
    };
    let c = coefficient(cfg, root)?;
    let mut fields: Vec<(&str, Cell)> = vec![("kind", name.into())];
    if !root.is_classical() {
        fields.push(("alpha", c.alpha.value().into()));
    }
    fields.extend([
        ("value", c.value.into()),
        ("residual", c.residual.into()),
        ("iterations", c.iterations.into()),
        ("bracket_lo", c.bracket.0.into()),
        ("bracket_hi", c.bracket.1.into()),
    ]);
    Ok(Outcome::ok(Report::record("fracstefan.solve/1", fields)))
}

// ---------------------------------------------------------------------------

fn solution(cfg: &RunConfig, kind: SolutionKind) -> Result<SelfSimilarSolution, CliError> {
    let c = coefficient(cfg, kind.root_kind())?;
    Ok(SelfSimilarSolution::from_coefficient(kind, c)?)
}

fn kind_name(kind: SolutionKind) -> &'static str {
    match kind {
        SolutionKind::CaputoP1 => "caputo",
        SolutionKind::RiemannLiouvilleP2 => "rl",
        SolutionKind::Classical => "classical",
    }
}

pub fn profile(cfg: &RunConfig, kind: ProfileKind) -> Result<Outcome, CliError> {
    let kind = match kind {
        ProfileKind::Caputo => SolutionKind::CaputoP1,
        ProfileKind::Rl => SolutionKind::RiemannLiouvilleP2,
        ProfileKind::Classical => SolutionKind::Classical,
    };
    let n = cfg.profile_points;
    if n < 2 {
        return Err(CliError::Usage(format!(
            "profile needs at least 2 points, got {n}"
        )));
    }
    let sol = solution(cfg, kind)?;
    let t = cfg.t;
    let front = sol.front(t);
    let mut report = Report::table("fracstefan.profile/1", &["x", "temperature", "flux"]);
    for i in 0..n {
        let x = if i + 1 == n {
            front
        } else {
            front * i as f64 / (n - 1) as f64
        };
        let p = point(x, t)?;
        report.push(vec![
            x.into(),
            sol.temperature(p)?.into(),
            sol.flux(p)?.into(),
        ]);
    }
    let extra = &mut report.extra;
    extra.insert("kind".into(), json!(kind_name(kind)));
    extra.insert("alpha".into(), json!(sol.alpha().value()));
    extra.insert("t".into(), json!(t));
    extra.insert("coefficient".into(), json!(sol.coefficient().value));
    extra.insert("front".into(), json!(front));
    Ok(Outcome::ok(report))
}

// ---------------------------------------------------------------------------

/// Residual bounds: PDE (fractional / classical), closed-form Stefan
/// condition, extrapolated RL condition.
const PDE_TOL: f64 = 1e-2;
const PDE_TOL_CLASSICAL: f64 = 1e-6;
const STEFAN_CAPUTO_TOL: f64 = 1e-10;
const STEFAN_RL_TOL: f64 = 5e-2;

fn caputo_or_classical(cfg: &RunConfig) -> Result<SelfSimilarSolution, CliError> {
    let alpha = required_alpha(cfg)?;
    if alpha.is_classical() {
        solution(cfg, SolutionKind::Classical)
    } else {
        solution(cfg, SolutionKind::CaputoP1)
    }
}

pub fn residual(
    cfg: &RunConfig,
    which: ResidualKind,
    negative_control: bool,
) -> Result<Outcome, CliError> {
    if negative_control && which != ResidualKind::StefanRl {
        return Err(CliError::Usage(
            "--negative-control applies to stefan-rl only".into(),
        ));
    }
    let t = cfg.t;
    let mut fields: Vec<(&str, Cell)> = Vec::new();
    let (residual, tolerance, pass, verdict) = match which {
        ResidualKind::Pde => {
            let sol = caputo_or_classical(cfg)?;
            let r = pde_residual_caputo(&sol, point(cfg.x, t)?, cfg.grid_n)?;
            let tol = if sol.alpha().is_classical() {
                PDE_TOL_CLASSICAL
            } else {
                PDE_TOL
            };
            fields.extend([
                ("check", "pde".into()),
                ("kind", kind_name(sol.kind()).into()),
                ("alpha", sol.alpha().value().into()),
                ("x", cfg.x.into()),
                ("t", t.into()),
                ("n", cfg.grid_n.into()),
            ]);
            (r, tol, r <= tol, None)
        }
        ResidualKind::StefanCaputo => {
            let sol = caputo_or_classical(cfg)?;
            let r = stefan_condition_residual_caputo(&sol, t)?;
            fields.extend([
                ("check", "stefan-caputo".into()),
                ("kind", kind_name(sol.kind()).into()),
                ("alpha", sol.alpha().value().into()),
                ("t", t.into()),
            ]);
            (r, STEFAN_CAPUTO_TOL, r <= STEFAN_CAPUTO_TOL, None)
        }
        ResidualKind::StefanRl => {
            let alpha = required_alpha(cfg)?;
            let (sol, op_alpha) = if alpha.is_classical() {
                if negative_control {
                    return Err(CliError::Usage(
                        "the negative control needs alpha < 1".into(),
                    ));
                }
                (
                    solution(cfg, SolutionKind::Classical)?,
                    Some(Alpha::new(cfg.proxy_alpha)?),
                )
            } else if negative_control {
                (solution(cfg, SolutionKind::CaputoP1)?, None)
            } else {
                (solution(cfg, SolutionKind::RiemannLiouvilleP2)?, None)
            };
            let mut check =
                RlConditionCheck::with_relative_offsets(&sol, t, cfg.rl_grid_n, &cfg.rl_offsets);
            check.execution = cfg.execution;
            if let Some(a) = op_alpha {
                check = check.with_operator_alpha(a);
            }
            let rep = stefan_condition_residual_rl(&sol, &check)?;
            let r = rep.residual;
            fields.extend([
                ("check", "stefan-rl".into()),
                ("kind", kind_name(sol.kind()).into()),
                ("alpha", sol.alpha().value().into()),
                ("operator_alpha", op_alpha.unwrap_or(alpha).value().into()),
                ("t", t.into()),
                ("n", cfg.rl_grid_n.into()),
                ("limit", rep.limit.into()),
                ("front_velocity", rep.front_velocity.into()),
            ]);
            if negative_control {
                let pass = r > STEFAN_RL_TOL;
                let v = if pass {
                    "PASS(control)"
                } else {
                    "FAIL(control)"
                };
                (r, STEFAN_RL_TOL, pass, Some(v))
            } else {
                (r, STEFAN_RL_TOL, r <= STEFAN_RL_TOL, None)
            }
        }
    };
    let verdict = verdict.unwrap_or(if pass { "PASS" } else { "FAIL" });
    fields.extend([
        ("residual", residual.into()),
        ("tolerance", tolerance.into()),
        ("verdict", verdict.into()),
    ]);
    Ok(Outcome {
        report: Report::record("fracstefan.residual/1", fields),
        pass,
    })
}

// ---------------------------------------------------------------------------

fn sweep_report(rep: &SweepReport, schema: &'static str, with_flags: bool) -> Report {
    let mut columns: Vec<&str> = rep
        .input_columns
        .iter()
        .chain(&rep.value_columns)
        .map(String::as_str)
        .collect();
    if with_flags {
        columns.extend(["pass", "violation"]);
    }
    let mut out = Report::table(schema, &columns);
    for row in &rep.rows {
        let mut cells: Vec<Cell> = row
            .inputs
            .iter()
            .chain(&row.values)
            .map(|&v| v.into())
            .collect();
        if with_flags {
            cells.push(row.pass.into());
            cells.push(row.violation.into());
        }
        out.push(cells);
    }
    let failed: Vec<Value> = rep
        .failed_checks()
        .map(|(i, c)| {
            json!({"row": i, "check": c.name, "observed": c.observed,
                   "bound": c.bound, "calibrated": c.calibrated})
        })
        .collect();
    let mut calibrated: Vec<&str> = Vec::new();
    for c in rep
        .rows
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| c.calibrated)
    {
        if !calibrated.contains(&c.name.as_str()) {
            calibrated.push(&c.name);
        }
    }
    let extra = &mut out.extra;
    extra.insert("name".into(), json!(rep.name));
    extra.insert("grid".into(), json!(rep.grid));
    extra.insert("worst_violation".into(), json!(rep.worst_violation));
    extra.insert("all_pass".into(), json!(rep.all_pass()));
    extra.insert("calibrated_checks".into(), json!(calibrated));
    extra.insert("failed_checks".into(), Value::Array(failed));
    out
}

pub fn sweep(cfg: &RunConfig, name: SweepName) -> Result<Outcome, CliError> {
    let acc = accuracy(cfg)?;
    let (rep, schema, flags) = match name {
        SweepName::Limits => {
            let mut alphas = cfg.alphas.clone();
            if cfg.limit_include_one && alphas.last().is_some_and(|&a| a < 1.0) {
                alphas.push(1.0);
            }
            let lc = LimitSweepConfig {
                alphas,
                x_grid: linspace(0.0, cfg.limit_x_max, cfg.limit_x_points),
                final_threshold: cfg.limit_final_threshold,
                exact_threshold: cfg.limit_exact_threshold,
                accuracy: acc,
                execution: cfg.execution,
                ..Default::default()
            };
            (
                verify::limit_sweep_with(&lc)?,
                "fracstefan.sweep.limits/1",
                true,
            )
        }
        SweepName::Ordering => {
            let tuples: Vec<_> = cfg
                .ordering_alphas
                .iter()
                .map(|&a| verify::remark_tuple(a))
                .collect();
            let n = cfg.ordering_points;
            let grid: Vec<f64> = (1..=n)
                .map(|i| cfg.ordering_x_max * i as f64 / n as f64)
                .collect();
            let rep = verify::ordering_sweep_with(&tuples, &grid, acc, cfg.execution)?;
            (rep, "fracstefan.sweep.ordering/1", true)
        }
        SweepName::Convergence => {
            let cc = ConvergenceSweepConfig {
                alphas: cfg.alphas.clone(),
                final_threshold: cfg.convergence_threshold,
                t_min: cfg.box_t_min,
                t_max: cfg.box_t_max,
                x_points: cfg.box_x_points,
                t_points: cfg.box_t_points,
                execution: cfg.execution,
                ..Default::default()
            };
            (
                verify::convergence_sweep_with(&cc)?,
                "fracstefan.sweep.convergence/1",
                true,
            )
        }
        SweepName::Figure => {
            let alpha = Alpha::new(cfg.figure_alpha)?;
            let grid = linspace(0.0, cfg.figure_x_max, cfg.figure_points);
            let rep = verify::figure_data_with(alpha, &grid, acc, cfg.execution)?;
            (rep, "fracstefan.sweep.figure/1", false)
        }
    };
    Ok(Outcome {
        report: sweep_report(&rep, schema, flags),
        pass: rep.all_pass(),
    })
}
