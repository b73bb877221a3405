//! `fracstefan`: evaluate, solve, profile, check and sweep the fractional
//! Stefan-problem solutions from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 series or
//! solver non-convergence, 4 bracket failure, 5 a check or sweep flag
//! failed.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{EvalFunction, Outcome, ProfileKind, ResidualKind, SolveKind, SweepName};
use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] fracstefan::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use fracstefan::Error as E;
        match self {
            CliError::Lib(e) => match e {
                E::NonConvergent { .. }
                | E::MaxIterations { .. }
                | E::ExtrapolationUnstable { .. } => 3,
                E::NoSignChange { .. } => 4,
                _ => 2,
            },
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "fracstefan", version)]
#[command(about = "Wright functions and explicit solutions of fractional Stefan problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    flags: Flags,
}

/// Flags override the config file, which overrides the built-in defaults.
#[derive(Args, Debug, Default)]
struct Flags {
    /// Fractional order; for `sweep figure` the curve order
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Comma-separated alpha ladder (limits, convergence, ordering sweeps)
    #[arg(long, global = true, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,

    /// Time
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,

    /// Position
    #[arg(long, global = true, allow_negative_numbers = true)]
    x: Option<f64>,

    /// Grid size: quadrature nodes for residuals, rows for profiles and
    /// sweep grids
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Tolerance: series tail for eval and sweeps, root width otherwise
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Config file of `key = value` lines (default: $FRACSTEFAN_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a special function: wright Z RHO BETA | mainardi RHO X |
    /// erf X | erfc X | gamma X
    Eval {
        #[arg(value_enum)]
        function: EvalFunction,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
    /// Solve for a front coefficient
    Solve {
        #[arg(value_enum)]
        kind: SolveKind,
    },
    /// Temperature and flux from x = 0 to the front at time --t
    Profile {
        #[arg(value_enum)]
        kind: ProfileKind,
    },
    /// Check a governing equation of a solution
    Residual {
        #[arg(value_enum)]
        which: ResidualKind,
        /// Run stefan-rl on the Caputo solution, which must fail the check
        #[arg(long)]
        negative_control: bool,
    },
    /// Run a verification sweep
    Sweep {
        #[arg(value_enum)]
        name: SweepName,
    },
}

fn apply_flags(cfg: &mut RunConfig, cmd: &Command, f: &Flags) {
    if let Some(tol) = f.tol {
        match cmd {
            Command::Eval { .. } => cfg.eval_tol = tol,
            Command::Sweep { .. } => cfg.series_tol = tol,
            _ => cfg.solver_tol = tol,
        }
    }
    if let Some(t) = f.t {
        cfg.t = t;
    }
    if let Some(x) = f.x {
        cfg.x = x;
    }
    if let Some(fmt) = f.format {
        cfg.format = Some(fmt);
    }
    if let Some(out) = &f.out {
        cfg.out = Some(out.display().to_string());
    }
    match cmd {
        Command::Sweep { name } => {
            if let Some(a) = f.alpha {
                cfg.figure_alpha = a;
            }
            if let Some(list) = &f.alphas {
                match name {
                    SweepName::Ordering => cfg.ordering_alphas = list.clone(),
                    _ => cfg.alphas = list.clone(),
                }
            }
            if let Some(n) = f.n {
                match name {
                    SweepName::Limits => cfg.limit_x_points = n,
                    SweepName::Ordering => cfg.ordering_points = n,
                    SweepName::Convergence => cfg.box_x_points = n,
                    SweepName::Figure => cfg.figure_points = n,
                }
            }
        }
        _ => {
            if let Some(a) = f.alpha {
                cfg.alpha = Some(a);
            }
            if let Some(n) = f.n {
                match cmd {
                    Command::Profile { .. } => cfg.profile_points = n,
                    Command::Residual {
                        which: ResidualKind::StefanRl,
                        ..
                    } => cfg.rl_grid_n = n,
                    _ => cfg.grid_n = n,
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = RunConfig::load(cli.flags.config.as_deref())?;
    apply_flags(&mut cfg, &cli.command, &cli.flags);
    let Outcome { report, pass } = match &cli.command {
        Command::Eval { function, args } => commands::eval(&cfg, *function, args)?,
        Command::Solve { kind } => commands::solve_front(&cfg, *kind)?,
        Command::Profile { kind } => commands::profile(&cfg, *kind)?,
        Command::Residual {
            which,
            negative_control,
        } => commands::residual(&cfg, *which, *negative_control)?,
        Command::Sweep { name } => commands::sweep(&cfg, *name)?,
    };
    let text = report.render(cfg.format, &cfg);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))?;
        }
    }
    if !pass {
        if let Some(name) = report.extra.get("name") {
            eprintln!("sweep {name}: some checks failed");
        }
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
