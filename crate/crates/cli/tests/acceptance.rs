//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use fracstefan::equations::{count_sign_changes, RootKind, RootProblem};
use fracstefan::frcalc::{rl_integral, SampledFunction};
use fracstefan::specfun::{double_factorial, gamma, wright_decaying, SeriesAccuracy, WrightEval};
use fracstefan::stefan::{
    pde_residual_caputo, stefan_condition_residual_caputo, stefan_condition_residual_rl,
    RlConditionCheck, SelfSimilarSolution, SolutionKind, SpaceTimePoint,
};
use fracstefan::verify::{self, linspace, LimitSweepConfig};
use fracstefan::Alpha;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn alpha(v: f64) -> Result<Alpha, String> {
    Alpha::new(v).map_err(err)
}

fn w(z: f64, rho: f64, beta: f64, tol: f64) -> Result<f64, String> {
    WrightEval::new(z, rho, beta)
        .with_accuracy(SeriesAccuracy::new(tol, 5000).map_err(err)?)
        .eval()
        .map_err(err)
}

fn cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fracstefan"))
        .args(args)
        .env_remove("FRACSTEFAN_CONFIG")
        .output()
        .map_err(err)?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (stdout, code) = cli(&full)?;
    ensure(code == 0, format!("{args:?} exited with {code}"))?;
    serde_json::from_slice(&stdout).map_err(err)
}

fn row_f64(v: &Value, key: &str) -> Result<f64, String> {
    v["rows"][0][key]
        .as_f64()
        .ok_or_else(|| format!("missing {key}"))
}

fn classical_root() -> Outcome {
    let v = cli_json(&["solve", "classical"])?;
    let (value, residual) = (row_f64(&v, "value")?, row_f64(&v, "residual")?);
    ensure((value - 0.6201).abs() <= 5e-4, format!("eta_1 = {value}"))?;
    ensure(residual.abs() <= 1e-12, format!("residual {residual:e}"))?;
    Ok(format!("eta_1 = {value:.15}, residual {residual:.1e}"))
}

fn zero_derivative_point() -> Outcome {
    let v = cli_json(&["solve", "eta0"])?;
    let value = row_f64(&v, "value")?;
    ensure((value - 0.3195).abs() <= 5e-4, format!("eta_0 = {value}"))?;
    Ok(format!("eta_0 = {value:.15}"))
}

fn front_ordering() -> Outcome {
    let mut min_gap = f64::INFINITY;
    for k in 1..=9 {
        let a = alpha(0.1 * k as f64)?;
        for kind in [RootKind::EtaFractional, RootKind::XiFractional] {
            let p = RootProblem::new(kind, Some(a)).map_err(err)?;
            let changes = count_sign_changes(|x| p.residual(x), 5.0, 2000).map_err(err)?;
            ensure(
                changes == 1,
                format!("{kind:?} at alpha {a}: {changes} sign changes"),
            )?;
        }
        let (eta, xi) = verify::front_pair(a).map_err(err)?;
        ensure(xi - eta > 1e-8, format!("alpha {a}: eta {eta} xi {xi}"))?;
        min_gap = min_gap.min(xi - eta);
    }
    Ok(format!("unique roots, smallest xi - eta = {min_gap:.3e}"))
}

fn identity_suite() -> Outcome {
    // xW(−x,−α/2,1) + W(−x,−α/2,1+α/2) = (2/α)W(−x,−α/2,α/2)
    let mut rel = 0.0f64;
    for x in [0.2, 0.7, 1.5] {
        for a in [0.3, 0.6, 0.9] {
            let h = a / 2.0;
            let lhs = x * w(-x, -h, 1.0, 1e-15)? + w(-x, -h, 1.0 + h, 1e-15)?;
            let rhs = 2.0 / a * w(-x, -h, h, 1e-15)?;
            rel = rel.max((lhs - rhs).abs());
        }
    }
    ensure(rel <= 1e-10, format!("Wright relation off by {rel:e}"))?;

    // d/dx W(x,ρ,β) = W(x,ρ,ρ+β)
    let mut deriv = 0.0f64;
    let h = 1e-5;
    for rho in [-0.45, -0.25, -0.1] {
        for beta in [0.5, 1.0, 1.5] {
            for i in 0..=30 {
                let x = -3.0 + 0.1 * i as f64;
                let fd = (w(x + h, rho, beta, 1e-16)? - w(x - h, rho, beta, 1e-16)?) / (2.0 * h);
                deriv = deriv.max((fd - w(x, rho, rho + beta, 1e-15)?).abs());
            }
        }
    }
    ensure(deriv <= 1e-6, format!("derivative rule off by {deriv:e}"))?;

    // I^a [x^{b−1} W(−c x^{−r}, −r, b)](1) = W(−c, −r, b+a)
    let mut worst_ratio = 0.0f64;
    for (r, b, a, c) in [(0.25, 0.8, 0.3, 1.0), (0.375, 0.625, 0.5, 2.0)] {
        let acc = SeriesAccuracy::new(1e-15, 5000).map_err(err)?;
        let profile = move |x: f64, beta: f64| {
            if x == 0.0 {
                0.0
            } else {
                wright_decaying(c * x.powf(-r), r, beta, acc).unwrap_or(f64::NAN)
            }
        };
        let exact = profile(1.0, b + a);
        let value = |n: usize| -> Result<f64, String> {
            let s = SampledFunction::from_fn(1.0, n, move |x| {
                if x == 0.0 {
                    0.0
                } else {
                    x.powf(b - 1.0) * profile(x, b)
                }
            })
            .map_err(err)?;
            rl_integral(&s, a, n).map_err(err)
        };
        let (coarse, fine) = (value(2048)?, value(4096)?);
        let measured = (coarse - fine).abs();
        let e = (fine - exact).abs();
        ensure(
            e <= 5.0 * measured,
            format!("integral identity err {e:e} vs {measured:e}"),
        )?;
        worst_ratio = worst_ratio.max(e / measured);
    }

    // (2n)! = 2^n n! (2n−1)!!  and  Γ(n+½) = (2n−1)!! √π / 2^n
    let (mut fact, mut fact2n) = (1u128, 1u128);
    let mut gamma_rel = 0.0f64;
    for n in 1..=10u64 {
        fact *= n as u128;
        fact2n *= ((2 * n - 1) * 2 * n) as u128;
        let df = double_factorial(2 * n - 1).map_err(err)?;
        ensure(
            fact2n == (1u128 << n) * fact * df as u128,
            format!("factorial identity n={n}"),
        )?;
        let g = gamma(n as f64 + 0.5).map_err(err)?;
        let closed = df as f64 / (1u64 << n) as f64 * PI.sqrt();
        gamma_rel = gamma_rel.max(((g - closed) / closed).abs());
    }
    ensure(
        gamma_rel <= 1e-12,
        format!("Gamma half-integer form off by {gamma_rel:e}"),
    )?;

    Ok(format!(
        "relation {rel:.1e}, derivative {deriv:.1e}, integral err/measured {worst_ratio:.2}, \
         Gamma rel {gamma_rel:.1e}"
    ))
}

fn limit_suite() -> Outcome {
    let cfg = LimitSweepConfig {
        alphas: vec![0.9, 0.99, 0.999, 1.0],
        x_grid: linspace(0.0, 3.0, 301),
        ..Default::default()
    };
    let rep = verify::limit_sweep_with(&cfg).map_err(err)?;
    let failed: Vec<String> = rep
        .failed_checks()
        .map(|(i, c)| format!("row {i} {}", c.name))
        .collect();
    ensure(failed.is_empty(), format!("failed: {failed:?}"))?;
    let at = |i: usize| rep.rows[i].values.iter().cloned().fold(0.0, f64::max);
    ensure(at(3) <= 1e-10, "gaps at alpha = 1")?;
    ensure(at(2) <= 1e-2, "gaps at alpha = 0.999")?;
    Ok(format!(
        "max gap {:.2e} at 0.999 (calibrated 1e-2), {:.1e} at 1",
        at(2),
        at(3)
    ))
}

fn ordering_suite() -> Outcome {
    let tuples: Vec<_> = [0.25, 0.5, 0.75, 0.9]
        .iter()
        .map(|&a| verify::remark_tuple(a))
        .collect();
    let grid: Vec<f64> = (1..=400).map(|i| 0.01 * i as f64).collect();
    let rep = verify::ordering_sweep(&tuples, &grid).map_err(err)?;
    ensure(
        rep.all_pass() && rep.worst_violation < 0.0,
        format!("worst {:e}", rep.worst_violation),
    )?;
    let origin = verify::figure_data(alpha(0.75)?, &[0.0]).map_err(err)?;
    ensure(origin.all_pass(), "curves differ at x = 0")?;
    Ok(format!(
        "strict on 1600 points, worst violation {:.3e}",
        rep.worst_violation
    ))
}

fn pde_residual() -> Outcome {
    let sol = SelfSimilarSolution::new(SolutionKind::CaputoP1, alpha(0.5)?).map_err(err)?;
    let p = SpaceTimePoint::new(0.2, 1.0).map_err(err)?;
    let r1 = pde_residual_caputo(&sol, p, 4096).map_err(err)?;
    let r2 = pde_residual_caputo(&sol, p, 8192).map_err(err)?;
    ensure(r1 <= 1e-2, format!("residual {r1:e}"))?;
    ensure(r1 / r2 >= 1.7, format!("doubling ratio {}", r1 / r2))?;
    let c = SelfSimilarSolution::classical().map_err(err)?;
    let rc = pde_residual_caputo(&c, p, 4096).map_err(err)?;
    ensure(rc <= 1e-6, format!("classical residual {rc:e}"))?;
    Ok(format!(
        "{r1:.3e} at n=4096, ratio {:.2} on doubling, classical {rc:.1e}",
        r1 / r2
    ))
}

fn stefan_conditions() -> Outcome {
    let mut caputo = 0.0f64;
    for a in [0.25, 0.5, 0.75] {
        let sol = SelfSimilarSolution::new(SolutionKind::CaputoP1, alpha(a)?).map_err(err)?;
        caputo = caputo.max(stefan_condition_residual_caputo(&sol, 1.0).map_err(err)?);
    }
    ensure(caputo <= 1e-10, format!("Caputo condition {caputo:e}"))?;
    let a = alpha(0.5)?;
    let rl = |kind| -> Result<f64, String> {
        let sol = SelfSimilarSolution::new(kind, a).map_err(err)?;
        let check = RlConditionCheck::with_relative_offsets(&sol, 1.0, 8192, &[0.2, 0.1, 0.05]);
        Ok(stefan_condition_residual_rl(&sol, &check)
            .map_err(err)?
            .residual)
    };
    let p2 = rl(SolutionKind::RiemannLiouvilleP2)?;
    let p1 = rl(SolutionKind::CaputoP1)?;
    ensure(
        p2 <= 5e-2,
        format!("RL condition on its own solution {p2:e}"),
    )?;
    ensure(
        p1 > 5e-2,
        format!("RL condition on the Caputo solution {p1:e}"),
    )?;
    Ok(format!(
        "Caputo {caputo:.1e}; RL {p2:.2e} (own) vs {p1:.3} (Caputo solution)"
    ))
}

fn convergence_sweep() -> Outcome {
    let rep = verify::convergence_sweep(&verify::DEFAULT_ALPHAS).map_err(err)?;
    let col = |name| {
        rep.column(name)
            .ok_or_else(|| format!("missing column {name}"))
    };
    let (eg, xg) = (col("eta_gap")?, col("xi_gap")?);
    let (tc, tr) = (col("sup_temp_gap_caputo")?, col("sup_temp_gap_rl")?);
    let last = eg.len() - 1;
    ensure(
        eg[last] <= 5e-3 && xg[last] <= 5e-3,
        format!("final gaps {} {}", eg[last], xg[last]),
    )?;
    for (name, c) in [
        ("eta_gap", &eg),
        ("xi_gap", &xg),
        ("temp caputo", &tc),
        ("temp rl", &tr),
    ] {
        ensure(
            c.windows(2).all(|p| p[1] < p[0]),
            format!("{name} not decreasing: {c:?}"),
        )?;
    }
    ensure(rep.all_pass(), "sweep flags")?;
    Ok(format!(
        "at 0.999: |eta-eta_1| {:.2e}, |xi-eta_1| {:.2e}, sup temp gaps {:.2e} / {:.2e}",
        eg[last], xg[last], tc[last], tr[last]
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("fracstefan-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "alphas = 0.9, 0.99, 0.999\nlimit_x_points = 101\n").map_err(err)?;
    let cfg = cfg.to_string_lossy().into_owned();
    let runs: Vec<Vec<&str>> = vec![
        vec!["eval", "wright", "--", "-2", "-0.5", "1"],
        vec!["solve", "xi", "--alpha", "0.3", "--format", "json"],
        vec!["profile", "rl", "--alpha", "0.7", "--t", "2", "--n", "51"],
        vec![
            "residual",
            "stefan-rl",
            "--alpha",
            "0.5",
            "--format",
            "json",
        ],
        vec!["sweep", "limits", "--config", &cfg, "--format", "json"],
        vec!["sweep", "ordering"],
        vec!["sweep", "convergence", "--format", "json"],
        vec!["sweep", "figure", "--alpha", "0.75"],
    ];
    for args in &runs {
        let (a, ca) = cli(args)?;
        let (b, cb) = cli(args)?;
        ensure(ca == 0 && cb == 0, format!("{args:?} exit {ca}/{cb}"))?;
        ensure(!a.is_empty() && a == b, format!("{args:?} output differs"))?;
    }
    let out = dir.join("fig.csv");
    let out = out.to_string_lossy().into_owned();
    let mut files = Vec::new();
    for _ in 0..2 {
        cli(&["sweep", "figure", "--out", &out])?;
        files.push(std::fs::read(&out).map_err(err)?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(files[0] == files[1], "--out files differ")?;
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len() + 1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("classical root", classical_root),
        ("zero-derivative point", zero_derivative_point),
        ("front ordering and uniqueness", front_ordering),
        ("identity suite", identity_suite),
        ("limit suite", limit_suite),
        ("ordering suite", ordering_suite),
        ("PDE residual", pde_residual),
        ("Stefan conditions", stefan_conditions),
        ("convergence sweep", convergence_sweep),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
