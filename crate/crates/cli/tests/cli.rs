use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_with(args: &[&str], config_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracstefan"));
    cmd.args(args).env_remove("FRACSTEFAN_CONFIG");
    if let Some(p) = config_env {
        cmd.env("FRACSTEFAN_CONFIG", p);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_with(args, None)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn eval_reference_values() {
    let o = run(&["eval", "wright", "--", "-2", "-0.5", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "value"), "0.157299207050285");
    let bound: f64 = field(&text, "truncation_bound").parse().unwrap();
    assert!(bound < 1e-15);

    let g: f64 = field(&stdout(&run(&["eval", "gamma", "0.5"])), "value")
        .parse()
        .unwrap();
    assert!((g - 1.772453850905516).abs() < 1e-14);
    let m: f64 = field(&stdout(&run(&["eval", "mainardi", "0.5", "2"])), "value")
        .parse()
        .unwrap();
    assert!((m - (-1.0f64).exp() / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    let e: f64 = field(&stdout(&run(&["eval", "erfc", "1"])), "value")
        .parse()
        .unwrap();
    assert!((e - 0.15729920705028513).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    // invalid input
    assert_eq!(
        run(&["eval", "wright", "--", "-1", "-1.5", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["eval", "gamma", "--", "-2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "wright", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "eta"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "eta", "--alpha", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "classical", "--config", "/no/such/file"])
            .status
            .code(),
        Some(2)
    );
    // series non-convergence
    assert_eq!(
        run(&["eval", "wright", "--", "-40", "-0.5", "1"])
            .status
            .code(),
        Some(3)
    );

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    // a bracket entirely right of the root
    std::fs::write(&cfg, "bracket_lo = 2\nbracket_hi = 3\n").unwrap();
    let o = run(&["solve", "classical", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    // an impossible calibrated threshold fails a sweep flag but still writes
    std::fs::write(&cfg, "limit_final_threshold = 1e-9\n").unwrap();
    let o = run(&["sweep", "limits", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).starts_with("alpha,"));
}

#[test]
fn solve_outputs() {
    let c = json(&["solve", "classical"]);
    assert_eq!(c["schema"], "fracstefan.solve/1");
    let v = c["rows"][0]["value"].as_f64().unwrap();
    assert!((v - 0.620062633313595).abs() < 1e-12);
    assert!(c["rows"][0]["residual"].as_f64().unwrap().abs() <= 1e-12);

    let z = json(&["solve", "eta0"]);
    assert!((z["rows"][0]["value"].as_f64().unwrap() - 0.3195).abs() <= 5e-4);

    let eta = json(&["solve", "eta", "--alpha", "0.5"])["rows"][0]["value"]
        .as_f64()
        .unwrap();
    let xi = json(&["solve", "xi", "--alpha", "0.5"])["rows"][0]["value"]
        .as_f64()
        .unwrap();
    assert!(eta < xi);
}

#[test]
fn json_document_layout() {
    let v = json(&["residual", "stefan-caputo", "--alpha", "0.5", "--t", "1"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(&keys[..3], ["schema", "config", "rows"]);
    assert_eq!(v["config"]["alpha"], 0.5);
    assert_eq!(v["rows"][0]["verdict"], "PASS");
    assert!(v["rows"][0]["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn profile_rows_and_endpoints() {
    let o = run(&[
        "profile", "caputo", "--alpha", "0.5", "--t", "2", "--n", "41",
    ]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["x", "temperature", "flux"]);
    assert_eq!(rows.len(), 41);
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert_eq!(num(&rows[0][1]), 1.0);
    assert!(num(&rows[40][1]).abs() <= 1e-12);
    assert!(rows.iter().all(|r| num(&r[2]) < 0.0));
    // 17 significant digits: d.dddddddddddddddde±x
    let mantissa = rows[1][0].split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').len(), 18);

    let c = json(&["profile", "classical", "--t", "4", "--n", "3"]);
    assert!((c["front"].as_f64().unwrap() - 2.0 * 0.620062633313595 * 2.0).abs() < 1e-12);
}

#[test]
fn residual_verdicts() {
    let o = run(&[
        "residual", "pde", "--alpha", "0.5", "--x", "0.2", "--t", "1", "--n", "4096",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "verdict"), "PASS");
    assert!(field(&text, "residual").parse::<f64>().unwrap() <= 1e-2);

    let o = run(&[
        "residual",
        "stefan-rl",
        "--alpha",
        "0.5",
        "--t",
        "1",
        "--negative-control",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "verdict"), "PASS(control)");
    assert!(field(&text, "residual").parse::<f64>().unwrap() > 5e-2);

    // a grid far too coarse for the PDE tolerance is a failed check
    let o = run(&[
        "residual", "pde", "--alpha", "0.3", "--x", "0.05", "--t", "0.25", "--n", "4",
    ]);
    assert_eq!(o.status.code(), Some(5), "{}", stdout(&o));
    assert_eq!(field(&stdout(&o), "verdict"), "FAIL");

    assert_eq!(
        run(&["residual", "pde", "--negative-control", "--alpha", "0.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = run(&[
        "sweep",
        "figure",
        "--alpha",
        "0.75",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header.len(), 4);
    assert_eq!(rows.len(), 301);

    let ord = json(&["sweep", "ordering"]);
    assert!(ord["worst_violation"].as_f64().unwrap() < 0.0);
    assert_eq!(ord["rows"].as_array().unwrap().len(), 1600);

    let conv = json(&["sweep", "convergence"]);
    let last = conv["rows"].as_array().unwrap().last().unwrap().clone();
    assert!(last["eta_gap"].as_f64().unwrap() <= 5e-3);
    assert!(last["xi_gap"].as_f64().unwrap() <= 5e-3);
    assert_eq!(conv["all_pass"], true);

    let lim = json(&["sweep", "limits"]);
    assert_eq!(lim["rows"].as_array().unwrap().len(), 6);
    assert!(lim["calibrated_checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c == "gap_erfc final"));
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# figure settings\nfigure_points = 11\nformat = json\n",
    )
    .unwrap();

    // the environment variable names the default config
    let o = run_with(&["sweep", "figure"], Some(&cfg));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);

    // flags override the file
    let o = run_with(
        &["sweep", "figure", "--n", "5", "--format", "csv"],
        Some(&cfg),
    );
    assert_eq!(csv_rows(&stdout(&o)).1.len(), 5);

    // --config overrides the environment variable
    let other = dir.path().join("other.cfg");
    std::fs::write(&other, "figure_points = 7\n").unwrap();
    let o = run_with(
        &["sweep", "figure", "--config", other.to_str().unwrap()],
        Some(&cfg),
    );
    assert_eq!(csv_rows(&stdout(&o)).1.len(), 7);

    std::fs::write(&other, "unknown_key = 1\n").unwrap();
    assert_eq!(
        run(&["sweep", "figure", "--config", other.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn execution_mode_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.cfg");
    let par = dir.path().join("par.cfg");
    std::fs::write(&seq, "execution = sequential\n").unwrap();
    std::fs::write(&par, "execution = parallel\n").unwrap();
    for args in [["sweep", "limits"], ["sweep", "convergence"]] {
        let a = run_with(&args, Some(&seq));
        let b = run_with(&args, Some(&par));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
