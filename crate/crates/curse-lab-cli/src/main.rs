//! `curse-lab` — compute exact worst-case quadrature errors, tabulate lower
//! bounds, certify Schur-product inequalities, and run seeded random-point
//! experiments from a declarative JSON problem configuration.
//!
//! Exit codes: 0 success, 1 parse error, 2 invalid parameter or violated
//! check, 3 domain/runtime error.

mod config;
mod output;

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use curse_lab::bounds::{
    curse_bound_homogeneous, curse_bound_weighted, korobov_varying_regime, korobov_weighted_diagnostics,
    min_nodes_for_eps, rotated_problem_bound, unified_bound,
};
use curse_lab::experiments::{
    optimize_nodes, random_info_experiment, ExperimentConfig, OptimizerConfig,
};
use curse_lab::schur::{run_suite, SuiteConfig, TheoremId};
use curse_lab::tensor::{worst_case_error_sq, PointSet, TensorProblem};

use config::ProblemConfig;
use output::{emit, fmt_f64, to_json_pretty, CsvTable, Format};

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn new(message: impl Into<String>, code: i32) -> Self {
        Self {
            message: message.into(),
            code,
        }
    }
    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(message, 1)
    }
    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(message, 2)
    }
    pub fn runtime(message: impl Into<String>) -> Self {
        Self::new(message, 3)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<curse_lab::Error> for CliError {
    fn from(e: curse_lab::Error) -> Self {
        match &e {
            curse_lab::Error::AlphaOutOfRange(_) | curse_lab::Error::InvalidParameter(_) => {
                CliError::invalid(e.to_string())
            }
            _ => CliError::runtime(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "curse-lab",
    about = "Worst-case quadrature errors, lower bounds, and random-information experiments in tensor-product RKHS",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Exact worst-case error e(X_n)² for point sets read from a file.
    Error {
        /// Problem configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// JSON file with an array of point sets (each an array of d-dim points).
        #[arg(long)]
        points: PathBuf,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Closed-form lower bounds from the config's bound block.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Randomized Schur-product inequality suite.
    SchurCheck {
        /// self | rank | two-matrix | combined | combined-tight
        #[arg(long)]
        theorem: String,
        /// Matrix order (1..=64).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Factor columns D; defaults to the matrix order.
        #[arg(long)]
        cols: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Seeded random-point experiment from the config's experiment block.
    RandomExp {
        #[arg(long)]
        config: PathBuf,
        /// Override the experiment block's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the experiment block's trial count.
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Search for good nodes with multistart Nelder-Mead.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Number of nodes to place.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Evaluation budget per restart.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Tables of n(ε, S_d) lower bounds for Korobov families.
    KorobovTable {
        /// varying | weighted
        #[arg(long)]
        mode: String,
        /// Smoothness sequence for varying mode, e.g. "1,1,2"; the last
        /// value extends to larger d.
        #[arg(long)]
        r: Option<String>,
        /// Smoothness s for weighted mode.
        #[arg(long)]
        s: Option<f64>,
        /// Constant product weight γ for weighted mode.
        #[arg(long)]
        gamma_const: Option<f64>,
        /// Power-law product weights γ_j = j^(-p) for weighted mode.
        #[arg(long)]
        gamma_power: Option<f64>,
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 10)]
        d_max: usize,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        io: IoArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Error { config, points, io } => cmd_error(&config, &points, &io),
        Command::Bound { config, io } => cmd_bound(&config, &io),
        Command::SchurCheck {
            theorem,
            n,
            trials,
            seed,
            cols,
            io,
        } => cmd_schur_check(&theorem, n, trials, seed, cols, &io),
        Command::RandomExp {
            config,
            seed,
            trials,
            io,
        } => cmd_random_exp(&config, seed, trials, &io),
        Command::Optimize {
            config,
            n,
            restarts,
            budget,
            seed,
            io,
        } => cmd_optimize(&config, n, restarts, budget, seed, &io),
        Command::KorobovTable {
            mode,
            r,
            s,
            gamma_const,
            gamma_power,
            d_min,
            d_max,
            eps,
            io,
        } => cmd_korobov_table(&mode, r, s, gamma_const, gamma_power, d_min, d_max, eps, &io),
    }
}

fn load_config(path: &PathBuf) -> Result<ProblemConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("reading {}: {e}", path.display())))?;
    ProblemConfig::parse(&text)
}

/// Cap from the CURSE_LAB_THREADS environment variable.
fn env_thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("CURSE_LAB_THREADS") {
        Ok(value) => value
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::invalid(format!("CURSE_LAB_THREADS: '{value}' is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn effective_threads(requested: Option<usize>) -> Result<Option<usize>, CliError> {
    Ok(match (requested, env_thread_cap()?) {
        (Some(r), Some(cap)) => Some(r.min(cap)),
        (Some(r), None) => Some(r),
        (None, cap) => cap,
    })
}

fn weights_digest(weights: &[f64]) -> String {
    let serialized = weights.iter().map(|w| fmt_f64(*w)).collect::<Vec<_>>().join(",");
    let digest = Sha256::digest(serialized.as_bytes());
    let mut hex = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[derive(Serialize)]
struct ErrorRow {
    n: usize,
    e_sq: f64,
    weights_digest: String,
    weights: Vec<f64>,
}

fn cmd_error(config_path: &PathBuf, points_path: &PathBuf, io: &IoArgs) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let problem = config.build_problem()?;
    let text = fs::read_to_string(points_path)
        .map_err(|e| CliError::parse(format!("reading {}: {e}", points_path.display())))?;
    let sets: Vec<Vec<Vec<f64>>> = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("points: {e}")))?;

    let mut rows = Vec::new();
    for set in sets {
        let points = PointSet::new(problem.dimension(), set).map_err(CliError::from)?;
        let wce = worst_case_error_sq(&problem, &points)?;
        rows.push(ErrorRow {
            n: points.len(),
            e_sq: wce.e_sq,
            weights_digest: weights_digest(&wce.weights),
            weights: wce.weights,
        });
    }
    match io.format {
        Format::Csv => {
            let mut table = CsvTable::new(&["n", "e_sq", "weights_digest"]);
            for row in &rows {
                table.row(&[
                    row.n.to_string(),
                    fmt_f64(row.e_sq),
                    row.weights_digest.clone(),
                ]);
            }
            emit(io.out.as_deref(), &table.render())
        }
        Format::Json => emit(io.out.as_deref(), &to_json_pretty(&rows)?),
    }
}

fn problem_alphas(problem: &TensorProblem) -> Result<Vec<f64>, CliError> {
    problem
        .factors()
        .iter()
        .map(|f| {
            f.alpha().ok_or_else(|| {
                CliError::invalid(format!(
                    "factor '{}' carries no alpha; the weighted formula does not apply",
                    f.family()
                ))
            })
        })
        .collect()
}

fn cmd_bound(config_path: &PathBuf, io: &IoArgs) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let block = config
        .bound
        .as_ref()
        .ok_or_else(|| CliError::invalid("config has no 'bound' block"))?;
    let n_grid = block.n.clone().unwrap_or_else(|| vec![1]);

    #[derive(Serialize)]
    struct BoundRow {
        formula: String,
        d: Option<usize>,
        g_norm_sq: Option<f64>,
        n: Option<u64>,
        epsilon: Option<f64>,
        value: f64,
    }
    let mut rows: Vec<BoundRow> = Vec::new();

    match block.formula.as_str() {
        "homogeneous" => {
            let problem_d = if config.factors.is_empty() {
                None
            } else {
                Some(config.build_problem()?.dimension())
            };
            let d_grid = block
                .d
                .clone()
                .or_else(|| problem_d.map(|d| vec![d]))
                .ok_or_else(|| CliError::invalid("field 'd': homogeneous bound needs a dimension grid"))?;
            for &d in &d_grid {
                if d == 0 {
                    return Err(CliError::invalid("field 'd': dimensions must be positive"));
                }
                for &n in &n_grid {
                    rows.push(BoundRow {
                        formula: "homogeneous".into(),
                        d: Some(d),
                        g_norm_sq: None,
                        n: Some(n),
                        epsilon: None,
                        value: curse_bound_homogeneous(d, n).bound_value,
                    });
                }
            }
        }
        "weighted" => {
            let problem = config.build_problem()?;
            let alphas = problem_alphas(&problem)?;
            for &n in &n_grid {
                rows.push(BoundRow {
                    formula: "weighted".into(),
                    d: Some(problem.dimension()),
                    g_norm_sq: None,
                    n: Some(n),
                    epsilon: None,
                    value: curse_bound_weighted(&alphas, n)?.bound_value,
                });
            }
        }
        "unified" => {
            let g_norm_sq = block
                .g_norm_sq
                .ok_or_else(|| CliError::invalid("field 'g_norm_sq' is required for the unified bound"))?;
            for &n in &n_grid {
                rows.push(BoundRow {
                    formula: "unified".into(),
                    d: None,
                    g_norm_sq: Some(g_norm_sq),
                    n: Some(n),
                    epsilon: None,
                    value: unified_bound(g_norm_sq, n)?.bound_value,
                });
            }
        }
        "rotated" => {
            let problem = config.build_problem()?;
            for &n in &n_grid {
                rows.push(BoundRow {
                    formula: "rotated".into(),
                    d: Some(problem.dimension()),
                    g_norm_sq: None,
                    n: Some(n),
                    epsilon: None,
                    value: rotated_problem_bound(&problem, n)?.bound_value,
                });
            }
        }
        "min-nodes" => {
            let problem = config.build_problem()?;
            let alphas = problem_alphas(&problem)?;
            let eps_grid = block
                .eps
                .clone()
                .ok_or_else(|| CliError::invalid("field 'eps' is required for min-nodes"))?;
            for &eps in &eps_grid {
                rows.push(BoundRow {
                    formula: "min-nodes".into(),
                    d: Some(problem.dimension()),
                    g_norm_sq: None,
                    n: None,
                    epsilon: Some(eps),
                    value: min_nodes_for_eps(&alphas, eps)?,
                });
            }
        }
        other => {
            return Err(CliError::invalid(format!(
                "field 'formula': unknown bound formula '{other}'"
            )))
        }
    }

    match io.format {
        Format::Csv => {
            let mut table = CsvTable::new(&["formula", "d", "g_norm_sq", "n", "epsilon", "value"]);
            for row in &rows {
                table.row(&[
                    row.formula.clone(),
                    row.d.map(|v| v.to_string()).unwrap_or_default(),
                    row.g_norm_sq.map(fmt_f64).unwrap_or_default(),
                    row.n.map(|v| v.to_string()).unwrap_or_default(),
                    row.epsilon.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(row.value),
                ]);
            }
            emit(io.out.as_deref(), &table.render())
        }
        Format::Json => emit(io.out.as_deref(), &to_json_pretty(&rows)?),
    }
}

fn cmd_schur_check(
    theorem: &str,
    n: usize,
    trials: usize,
    seed: u64,
    cols: Option<usize>,
    io: &IoArgs,
) -> Result<(), CliError> {
    if n == 0 || n > 64 {
        return Err(CliError::invalid(format!(
            "matrix order n must lie in 1..=64, got {n}"
        )));
    }
    if trials == 0 {
        return Err(CliError::invalid("need at least one trial"));
    }
    let (id, experimental) = match theorem {
        "self" => (TheoremId::SelfN, false),
        "rank" => (TheoremId::RankR, false),
        "two-matrix" => (TheoremId::TwoMatrix, false),
        "combined" => (TheoremId::Combined2R, false),
        "combined-tight" => (TheoremId::Combined2R, true),
        other => {
            return Err(CliError::invalid(format!(
                "unknown theorem '{other}' (self | rank | two-matrix | combined | combined-tight)"
            )))
        }
    };
    let summary = run_suite(&SuiteConfig {
        theorem: id,
        order: n,
        trials,
        seed,
        factor_cols: cols.unwrap_or(n),
        experimental_tight: experimental,
    })?;

    #[derive(Serialize)]
    struct SchurOutput<'a> {
        theorem: &'a str,
        order: usize,
        trials: usize,
        seed: u64,
        worst_margin: f64,
        violations: usize,
        exploratory: bool,
    }
    let out = SchurOutput {
        theorem,
        order: n,
        trials,
        seed,
        worst_margin: summary.worst_margin,
        violations: summary.violations,
        exploratory: experimental,
    };
    emit(io.out.as_deref(), &to_json_pretty(&out)?)?;

    // Exploratory runs with the conjectured constant report and never fail;
    // proven inequalities exit 2 on any violation beyond tolerance.
    if summary.violations > 0 && !experimental {
        return Err(CliError::invalid(format!(
            "{} violations in {} trials (worst margin {:.3e})",
            summary.violations, trials, summary.worst_margin
        )));
    }
    Ok(())
}

fn cmd_random_exp(
    config_path: &PathBuf,
    seed_override: Option<u64>,
    trials_override: Option<usize>,
    io: &IoArgs,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let problem = config.build_problem()?;
    let block = config
        .experiment
        .as_ref()
        .ok_or_else(|| CliError::invalid("config has no 'experiment' block"))?;
    let trials = trials_override.unwrap_or(block.trials);
    if trials == 0 {
        return Err(CliError::invalid("field 'trials' must be at least 1"));
    }
    let mut exp = ExperimentConfig::new(block.n, trials, seed_override.unwrap_or(block.seed));
    if let Some(t) = block.threshold {
        exp.e_sq_threshold = t;
    }
    exp.dominance_threshold = block.dominance_threshold;
    exp.threads = effective_threads(block.threads)?;

    let result = random_info_experiment(&problem, &exp)?;
    match io.format {
        Format::Csv => {
            let mut table = CsvTable::new(&["trial", "e_sq"]);
            for (trial, &e) in result.e_sq.iter().enumerate() {
                table.row(&[trial.to_string(), fmt_f64(e)]);
            }
            emit(io.out.as_deref(), &table.render())
        }
        Format::Json => emit(io.out.as_deref(), &to_json_pretty(&result)?),
    }
}

fn cmd_optimize(
    config_path: &PathBuf,
    n: usize,
    restarts: usize,
    budget: usize,
    seed: u64,
    io: &IoArgs,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let problem = config.build_problem()?;
    let outcome = optimize_nodes(
        &problem,
        n,
        &OptimizerConfig {
            restarts,
            max_evals_per_restart: budget,
            seed,
            threads: effective_threads(None)?,
        },
    )?;

    #[derive(Serialize)]
    struct OptimizeOutput {
        n: usize,
        e_sq: f64,
        evaluations: u64,
        budget_exhausted: bool,
        points: Vec<Vec<f64>>,
    }
    let out = OptimizeOutput {
        n,
        e_sq: outcome.e_sq,
        evaluations: outcome.evaluations,
        budget_exhausted: outcome.budget_exhausted,
        points: outcome.points.rows().to_vec(),
    };
    match io.format {
        Format::Csv => {
            let mut table = CsvTable::new(&["n", "e_sq", "evaluations", "budget_exhausted"]);
            table.row(&[
                out.n.to_string(),
                fmt_f64(out.e_sq),
                out.evaluations.to_string(),
                out.budget_exhausted.to_string(),
            ]);
            emit(io.out.as_deref(), &table.render())
        }
        Format::Json => emit(io.out.as_deref(), &to_json_pretty(&out)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_korobov_table(
    mode: &str,
    r: Option<String>,
    s: Option<f64>,
    gamma_const: Option<f64>,
    gamma_power: Option<f64>,
    d_min: usize,
    d_max: usize,
    eps: f64,
    io: &IoArgs,
) -> Result<(), CliError> {
    if d_min == 0 || d_max < d_min {
        return Err(CliError::invalid(
            "fields 'd_min'/'d_max' must satisfy 1 <= d_min <= d_max",
        ));
    }
    match mode {
        "varying" => {
            let spec = r.ok_or_else(|| CliError::invalid("field 'r' is required in varying mode"))?;
            let mut orders: Vec<u32> = Vec::new();
            for item in spec.split(',') {
                orders.push(item.trim().parse::<u32>().map_err(|_| {
                    CliError::invalid(format!("field 'r': '{item}' is not a positive integer"))
                })?);
            }
            // Extend by the final smoothness so any d is covered.
            let last = *orders
                .last()
                .ok_or_else(|| CliError::invalid("field 'r' must not be empty"))?;
            while orders.len() < d_max {
                orders.push(last);
            }
            let mut table = CsvTable::new(&["d", "epsilon", "n_lower", "regime"]);
            for d in d_min..=d_max {
                let prefix = &orders[..d];
                let alphas: Vec<f64> = prefix
                    .iter()
                    .map(|&ri| 2.0_f64.sqrt() * (2.0 * std::f64::consts::PI).powi(-(ri as i32)))
                    .collect();
                let n_lower = min_nodes_for_eps(&alphas, eps)?;
                let regime = korobov_varying_regime(prefix)?;
                table.row(&[d.to_string(), fmt_f64(eps), fmt_f64(n_lower), regime]);
            }
            emit(io.out.as_deref(), &table.render())
        }
        "weighted" => {
            let s = s.ok_or_else(|| CliError::invalid("field 's' is required in weighted mode"))?;
            let gamma_of = |j: usize| -> f64 {
                match (gamma_const, gamma_power) {
                    (Some(g), _) => g,
                    (None, Some(p)) => (j as f64).powf(-p),
                    (None, None) => 1.0,
                }
            };
            let rows_spec: Vec<Vec<f64>> = (d_min..=d_max)
                .map(|d| (1..=d).map(gamma_of).collect())
                .collect();
            let rows = korobov_weighted_diagnostics(s, &rows_spec, eps)?;
            let mut table = CsvTable::new(&[
                "d",
                "epsilon",
                "n_lower",
                "gamma_sum",
                "gamma_sum_over_log",
                "gamma_mean",
                "regime",
            ]);
            for row in rows {
                table.row(&[
                    row.d.to_string(),
                    fmt_f64(row.epsilon),
                    fmt_f64(row.n_lower),
                    fmt_f64(row.gamma_sum),
                    fmt_f64(row.gamma_sum_over_log),
                    fmt_f64(row.gamma_mean),
                    row.regime,
                ]);
            }
            emit(io.out.as_deref(), &table.render())
        }
        other => Err(CliError::invalid(format!(
            "unknown mode '{other}' (varying | weighted)"
        ))),
    }
}
