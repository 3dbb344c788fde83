//! Random-point experiments, diagonal-dominance diagnostics, and a
//! derivative-free node-placement oracle.
//!
//! Everything is seeded and reproducible: trial t draws from a counter-based
//! substream `(master seed, t)`, aggregation walks trials in index order, so
//! the result is bit-identical at any parallel degree.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundParams, FormulaId, LowerBoundReport};
use crate::error::{Error, Result};
use crate::factors::Domain;
use crate::tensor::{
    gram_assemble, worst_case_error_sq, PointSet, QuadratureRule, TensorProblem,
};

/// Configuration of a seeded random-point experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Points per trial.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Fraction of trials with `e² ≥` this value is reported.
    pub e_sq_threshold: f64,
    /// When set, each trial also runs the diagonal-dominance probe at this
    /// threshold and the success rate is reported.
    pub dominance_threshold: Option<f64>,
    /// Cap on worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            e_sq_threshold: 0.5,
            dominance_threshold: None,
            threads: None,
        }
    }
}

/// Seeded Monte Carlo statistics of `e(X_n, S_d)²` over random point sets.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    /// Per-trial squared errors, in trial order.
    pub e_sq: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub threshold: f64,
    /// Fraction of trials with `e² ≥ threshold`.
    pub frac_above_threshold: f64,
    /// Fraction of trials whose shifted kernel matrix was diagonally
    /// dominant, when the probe was enabled.
    pub dominance_rate: Option<f64>,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn sample_with_rng(domains: &[Domain], n: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    let mut ranges = Vec::with_capacity(domains.len());
    for domain in domains {
        let (lo, hi) = domain
            .bounds()
            .ok_or_else(|| Error::UnboundedDomain(domain.to_string()))?;
        ranges.push((lo, hi - lo));
    }
    let rows = (0..n)
        .map(|_| {
            ranges
                .iter()
                .map(|&(lo, width)| lo + rng.random::<f64>() * width)
                .collect()
        })
        .collect();
    PointSet::new(domains.len(), rows)
}

/// n independent points, uniform per coordinate over each bounded domain.
/// The same seed always yields the same coordinates.
pub fn sample_uniform_points(domains: &[Domain], n: usize, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(domains, n, &mut rng)
}

/// The point set trial `trial` of an experiment draws under `(seed, trial)`.
/// Exposed so external scripts can re-derive per-trial inputs and verify the
/// reported errors independently.
pub fn sample_trial_points(
    domains: &[Domain],
    n: usize,
    seed: u64,
    trial: usize,
) -> Result<PointSet> {
    let mut rng = trial_rng(seed, trial);
    sample_with_rng(domains, n, &mut rng)
}

fn run_trials<T, F>(threads: Option<usize>, trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let body = || (0..trials).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    }
}

/// Monte Carlo estimate of the distribution of `e(X_n, S_d)²` over uniform
/// random point sets.
pub fn random_info_experiment(
    problem: &TensorProblem,
    config: &ExperimentConfig,
) -> Result<ExperimentResult> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let domains = problem.domains();
    for domain in &domains {
        if domain.bounds().is_none() {
            return Err(Error::UnboundedDomain(domain.to_string()));
        }
    }
    let outcomes = run_trials(config.threads, config.trials, |trial| {
        let points = sample_trial_points(&domains, config.n, config.seed, trial)?;
        let e = worst_case_error_sq(problem, &points)?;
        let dominant = match config.dominance_threshold {
            Some(threshold) => {
                Some(diagonal_dominance_probe(problem, &points, threshold)?.dominant)
            }
            None => None,
        };
        Ok((e.e_sq, dominant))
    })?;

    let e_sq: Vec<f64> = outcomes.iter().map(|(e, _)| *e).collect();
    let mut mean = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut above = 0usize;
    for &v in &e_sq {
        mean += v;
        min = min.min(v);
        max = max.max(v);
        if v >= config.e_sq_threshold {
            above += 1;
        }
    }
    mean /= e_sq.len() as f64;
    let dominance_rate = config.dominance_threshold.map(|_| {
        let hits = outcomes
            .iter()
            .filter(|(_, d)| *d == Some(true))
            .count();
        hits as f64 / outcomes.len() as f64
    });
    Ok(ExperimentResult {
        e_sq,
        mean,
        min,
        max,
        threshold: config.e_sq_threshold,
        frac_above_threshold: above as f64 / outcomes.len() as f64,
        dominance_rate,
    })
}

/// Outcome of the diagonal-dominance test on `(K_d(x_i, x_j) − t)_{i,j}`.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub dominant: bool,
    /// Smallest row margin `(K_ii − t) − Σ_{j≠i} |K_ij − t|`.
    pub min_margin: f64,
    /// For unit-representer problems, dominance certifies
    /// `e(X_n)² ≥ 1 − 1/t` through the PSD route.
    pub implied_bound: Option<LowerBoundReport>,
}

/// Test whether the threshold-shifted kernel matrix is strictly diagonally
/// dominant, the mechanism behind the random-information lower bound.
pub fn diagonal_dominance_probe(
    problem: &TensorProblem,
    points: &PointSet,
    threshold: f64,
) -> Result<DominanceReport> {
    if !threshold.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "threshold must be finite, got {threshold}"
        )));
    }
    let system = gram_assemble(problem, points)?;
    let Some(gram) = &system.gram else {
        return Ok(DominanceReport {
            dominant: false,
            min_margin: 0.0,
            implied_bound: None,
        });
    };
    let n = gram.order();
    let mut min_margin = f64::INFINITY;
    for i in 0..n {
        let mut margin = gram.get(i, i) - threshold;
        for j in 0..n {
            if j != i {
                margin -= (gram.get(i, j) - threshold).abs();
            }
        }
        min_margin = min_margin.min(margin);
    }
    let dominant = min_margin > 0.0;
    let unit_representer = problem.factors().iter().all(|f| f.has_unit_representer());
    let implied_bound = (dominant && unit_representer && threshold > 0.0).then(|| {
        LowerBoundReport {
            formula_id: FormulaId::RandomInfo,
            bound_value: 1.0 - 1.0 / threshold,
            params: BoundParams::RandomInfo {
                threshold,
                n: n as u64,
            },
            certified: true,
        }
    });
    Ok(DominanceReport {
        dominant,
        min_margin,
        implied_bound,
    })
}

/// Configuration of the multistart Nelder-Mead node search.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_evals_per_restart: 2000,
            seed: 0,
            threads: None,
        }
    }
}

/// Best point set found and its exact squared error. Never claimed globally
/// optimal; always a valid upper bound on `e(n, S_d)²`.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub points: PointSet,
    pub e_sq: f64,
    pub evaluations: u64,
    /// True when at least one restart stopped on its evaluation budget
    /// rather than on convergence.
    pub budget_exhausted: bool,
}

/// Heuristic oracle for `e(n, S_d) = inf over node sets`: multistart
/// Nelder-Mead over the flattened n·d coordinates, with coordinates folded
/// back into the (search-boxed) domain by reflection.
pub fn optimize_nodes(
    problem: &TensorProblem,
    n: usize,
    config: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    let d = problem.dimension();
    if n == 0 {
        return Ok(OptimizeOutcome {
            points: PointSet::empty(d),
            e_sq: problem.initial_error_sq(),
            evaluations: 0,
            budget_exhausted: false,
        });
    }
    if config.restarts == 0 || config.max_evals_per_restart < 2 {
        return Err(Error::InvalidParameter(
            "optimizer needs at least one restart and a usable budget".into(),
        ));
    }
    let boxes: Vec<(f64, f64)> = problem
        .domains()
        .iter()
        .map(|dom| dom.optimization_bounds())
        .collect();

    let objective = |flat: &[f64]| -> (Vec<f64>, f64) {
        let folded: Vec<f64> = flat
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let (lo, hi) = boxes[k % d];
                fold_into(x, lo, hi)
            })
            .collect();
        let rows: Vec<Vec<f64>> = folded.chunks(d).map(|c| c.to_vec()).collect();
        let points = PointSet::new(d, rows).expect("folded coordinates are well-formed");
        let e = worst_case_error_sq(problem, &points)
            .expect("folded coordinates are in-domain")
            .e_sq;
        (folded, e)
    };

    let runs = run_trials(config.threads, config.restarts, |restart| {
        let mut rng = trial_rng(config.seed, restart);
        let dims = n * d;
        let start: Vec<f64> = (0..dims)
            .map(|k| {
                let (lo, hi) = boxes[k % d];
                lo + rng.random::<f64>() * (hi - lo)
            })
            .collect();
        let steps: Vec<f64> = (0..dims).map(|k| {
            let (lo, hi) = boxes[k % d];
            0.2 * (hi - lo)
        })
        .collect();
        Ok(nelder_mead(
            &objective,
            &start,
            &steps,
            config.max_evals_per_restart,
        ))
    })?;

    let mut best = runs[0].clone();
    let mut evaluations = 0u64;
    let mut budget_exhausted = false;
    for run in &runs {
        evaluations += run.evals as u64;
        budget_exhausted |= run.exhausted;
        if run.f_best < best.f_best {
            best = run.clone();
        }
    }

    // One refinement pass from the incumbent with a tight initial simplex.
    let steps: Vec<f64> = (0..n * d)
        .map(|k| {
            let (lo, hi) = boxes[k % d];
            1e-3 * (hi - lo)
        })
        .collect();
    let polish = nelder_mead(&objective, &best.x_best, &steps, config.max_evals_per_restart);
    evaluations += polish.evals as u64;
    budget_exhausted |= polish.exhausted;
    if polish.f_best < best.f_best {
        best = polish;
    }

    let (folded, e_sq) = objective(&best.x_best);
    evaluations += 1;
    let rows: Vec<Vec<f64>> = folded.chunks(d).map(|c| c.to_vec()).collect();
    Ok(OptimizeOutcome {
        points: PointSet::new(d, rows)?,
        e_sq,
        evaluations,
        budget_exhausted,
    })
}

/// True when the rule integrates the problem's space exactly (error at most
/// 1e-8).
pub fn exactness_check(problem: &TensorProblem, rule: &QuadratureRule) -> Result<bool> {
    Ok(crate::tensor::error_of_rule(problem, rule)? <= 1e-8)
}

/// Reflect a coordinate into `[lo, hi]` (triangle wave), clamping the
/// boundary arithmetic.
fn fold_into(x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    if x >= lo && x <= hi {
        return x;
    }
    let t = (x - lo).rem_euclid(2.0 * width);
    let r = if t <= width { t } else { 2.0 * width - t };
    (lo + r).clamp(lo, hi)
}

#[derive(Debug, Clone)]
struct NmRun {
    x_best: Vec<f64>,
    f_best: f64,
    evals: usize,
    exhausted: bool,
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
/// 1/2) with an evaluation budget.
fn nelder_mead<F>(objective: &F, start: &[f64], steps: &[f64], max_evals: usize) -> NmRun
where
    F: Fn(&[f64]) -> (Vec<f64>, f64),
{
    let dims = start.len();
    let f = |x: &[f64]| objective(x).1;

    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dims + 1);
    simplex.push(start.to_vec());
    for k in 0..dims {
        let mut v = start.to_vec();
        v[k] += steps[k];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let mut exhausted = false;
    loop {
        // Order ascending by value.
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let spread = values[dims] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max)
            })
            .fold(0.0_f64, f64::max);
        if spread <= 1e-14 && diameter <= 1e-10 {
            break;
        }
        if evals >= max_evals {
            exhausted = true;
            break;
        }

        let centroid: Vec<f64> = (0..dims)
            .map(|k| simplex[..dims].iter().map(|x| x[k]).sum::<f64>() / dims as f64)
            .collect();
        let worst = simplex[dims].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + (c - w))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            if f_expand < f_reflect {
                simplex[dims] = expand;
                values[dims] = f_expand;
            } else {
                simplex[dims] = reflect;
                values[dims] = f_reflect;
            }
        } else if f_reflect < values[dims - 1] {
            simplex[dims] = reflect;
            values[dims] = f_reflect;
        } else {
            let (contract, f_contract) = if f_reflect < values[dims] {
                let outside: Vec<f64> = centroid
                    .iter()
                    .zip(&reflect)
                    .map(|(c, r)| c + 0.5 * (r - c))
                    .collect();
                let v = eval(&outside, &mut evals);
                (outside, v)
            } else {
                let inside: Vec<f64> = centroid
                    .iter()
                    .zip(&worst)
                    .map(|(c, w)| c + 0.5 * (w - c))
                    .collect();
                let v = eval(&inside, &mut evals);
                (inside, v)
            };
            if f_contract < f_reflect.min(values[dims]) {
                simplex[dims] = contract;
                values[dims] = f_contract;
            } else {
                // Shrink toward the best vertex.
                for i in 1..=dims {
                    let shrunk: Vec<f64> = simplex[0]
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    simplex[i] = shrunk;
                    values[i] = eval(&simplex[i], &mut evals);
                }
            }
        }
    }

    let mut best_idx = 0;
    for i in 1..values.len() {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    NmRun {
        x_best: simplex[best_idx].clone(),
        f_best: values[best_idx],
        evals,
        exhausted,
    }
}
