//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::path::Path;

use fracstefan::verify::DEFAULT_ALPHAS;
use fracstefan::Execution;
use serde::Serialize;

use crate::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "FRACSTEFAN_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub series_tol: f64,
    /// Series tolerance for `eval`, which prints 15 significant digits.
    pub eval_tol: f64,
    pub series_max_terms: usize,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub solver_tol: f64,

    /// No default: fractional commands require it.
    pub alpha: Option<f64>,
    pub x: f64,
    pub t: f64,
    pub grid_n: usize,
    pub rl_grid_n: usize,
    pub rl_offsets: Vec<f64>,
    pub proxy_alpha: f64,
    pub profile_points: usize,

    pub alphas: Vec<f64>,
    pub limit_include_one: bool,
    pub limit_x_max: f64,
    pub limit_x_points: usize,
    pub limit_final_threshold: f64,
    pub limit_exact_threshold: f64,
    pub ordering_alphas: Vec<f64>,
    pub ordering_x_max: f64,
    pub ordering_points: usize,
    pub convergence_threshold: f64,
    pub box_t_min: f64,
    pub box_t_max: f64,
    pub box_x_points: usize,
    pub box_t_points: usize,
    pub figure_alpha: f64,
    pub figure_x_max: f64,
    pub figure_points: usize,

    pub execution: Execution,
    pub format: Option<Format>,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-12,
            eval_tol: 1e-16,
            series_max_terms: 500,
            bracket_lo: 1e-4,
            bracket_hi: 5.0,
            solver_tol: 1e-12,
            alpha: None,
            x: 0.2,
            t: 1.0,
            grid_n: 4096,
            rl_grid_n: 8192,
            rl_offsets: vec![0.2, 0.1, 0.05],
            proxy_alpha: 0.99,
            profile_points: 101,
            alphas: DEFAULT_ALPHAS.to_vec(),
            limit_include_one: true,
            limit_x_max: 3.0,
            limit_x_points: 301,
            limit_final_threshold: 1e-2,
            limit_exact_threshold: 1e-10,
            ordering_alphas: vec![0.25, 0.5, 0.75, 0.9],
            ordering_x_max: 4.0,
            ordering_points: 400,
            convergence_threshold: 5e-3,
            box_t_min: 0.5,
            box_t_max: 2.0,
            box_x_points: 41,
            box_t_points: 16,
            figure_alpha: 0.75,
            figure_x_max: 3.0,
            figure_points: 301,
            execution: Execution::default(),
            format: None,
            out: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn boolean(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!(
            "{key}: expected true or false, got {v:?}"
        ))),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "series_tol" => self.series_tol = num(key, v)?,
            "eval_tol" => self.eval_tol = num(key, v)?,
            "series_max_terms" => self.series_max_terms = num(key, v)?,
            "bracket_lo" => self.bracket_lo = num(key, v)?,
            "bracket_hi" => self.bracket_hi = num(key, v)?,
            "solver_tol" => self.solver_tol = num(key, v)?,
            "alpha" => self.alpha = Some(num(key, v)?),
            "x" => self.x = num(key, v)?,
            "t" => self.t = num(key, v)?,
            "grid_n" => self.grid_n = num(key, v)?,
            "rl_grid_n" => self.rl_grid_n = num(key, v)?,
            "rl_offsets" => self.rl_offsets = list(key, v)?,
            "proxy_alpha" => self.proxy_alpha = num(key, v)?,
            "profile_points" => self.profile_points = num(key, v)?,
            "alphas" => self.alphas = list(key, v)?,
            "limit_include_one" => self.limit_include_one = boolean(key, v)?,
            "limit_x_max" => self.limit_x_max = num(key, v)?,
            "limit_x_points" => self.limit_x_points = num(key, v)?,
            "limit_final_threshold" => self.limit_final_threshold = num(key, v)?,
            "limit_exact_threshold" => self.limit_exact_threshold = num(key, v)?,
            "ordering_alphas" => self.ordering_alphas = list(key, v)?,
            "ordering_x_max" => self.ordering_x_max = num(key, v)?,
            "ordering_points" => self.ordering_points = num(key, v)?,
            "convergence_threshold" => self.convergence_threshold = num(key, v)?,
            "box_t_min" => self.box_t_min = num(key, v)?,
            "box_t_max" => self.box_t_max = num(key, v)?,
            "box_x_points" => self.box_x_points = num(key, v)?,
            "box_t_points" => self.box_t_points = num(key, v)?,
            "figure_alpha" => self.figure_alpha = num(key, v)?,
            "figure_x_max" => self.figure_x_max = num(key, v)?,
            "figure_points" => self.figure_points = num(key, v)?,
            "execution" => {
                self.execution = match v {
                    "parallel" => Execution::Parallel,
                    "sequential" => Execution::Sequential,
                    _ => {
                        return Err(CliError::Config(format!(
                            "execution: expected parallel or sequential, got {v:?}"
                        )))
                    }
                }
            }
            "format" => {
                self.format = Some(match v {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => {
                        return Err(CliError::Config(format!(
                            "format: expected csv or json, got {v:?}"
                        )))
                    }
                })
            }
            "out" => self.out = Some(v.to_string()),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    /// Loads the explicit path, else the file named by [`CONFIG_ENV`], else
    /// the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let env = std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty());
        let path = path.map(Path::to_path_buf).or_else(|| env.map(Into::into));
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    /// The configuration as `key = value` text that [`RunConfig::parse`]
    /// reads back.
    #[cfg(test)]
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        use std::fmt::Write as _;
        let mut s = String::new();
        for (k, v) in value.as_object().expect("struct") {
            let text = match v {
                serde_json::Value::Null => continue,
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(a) => a
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            writeln!(s, "{k} = {text}").unwrap();
        }
        s
    }
}
