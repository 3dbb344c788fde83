//! Schur-product lower-bound checks.
//!
//! Four inequalities, each tying the Schur (entrywise) product of PSD
//! matrices to a rank-one matrix built from diagonals:
//!
//! * self product: `M∘M ⪰ (1/n)(diag M)(diag M)ᵀ`,
//! * rank-aware:   `M∘M ⪰ (1/r)(diag M)(diag M)ᵀ` for rank-r `M`,
//! * two-matrix:   `Σ c_j c_k M_jk N_jk ≥ (1/D)(Σ c_j ⟨A^j,B^j⟩)²`,
//! * combined:     `Σ c_j c_k M²_jk ≥ (1/(2r))(Σ c_j ⟨A^j,B^j⟩)²`
//!   for `M = AAᵀ = BBᵀ` of rank r.
//!
//! PSD-form checks return an eigenvalue certificate; scalar-form checks are
//! evaluated on explicit witness vectors `c`, mirroring how the two-matrix
//! statement is quantified.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Factor, PsdCertificate, SymMatrix, DEFAULT_PSD_TOL};

/// Which inequality a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    SelfN,
    RankR,
    TwoMatrix,
    Combined2R,
}

/// Evidence attached to a check: a PSD certificate for matrix-form
/// inequalities, or both sides of a scalar inequality.
#[derive(Debug, Clone, Serialize)]
pub enum CheckCertificate {
    Psd(PsdCertificate),
    Scalar { lhs: f64, rhs: f64, margin: f64, scale: f64 },
}

impl CheckCertificate {
    /// True when the inequality holds within `1e-9 · scale`.
    pub fn holds(&self) -> bool {
        match self {
            CheckCertificate::Psd(cert) => cert.is_psd(),
            CheckCertificate::Scalar { margin, scale, .. } => *margin >= -1e-9 * scale,
        }
    }

    /// Signed slack, normalized so that negative means violation beyond noise.
    pub fn margin(&self) -> f64 {
        match self {
            CheckCertificate::Psd(cert) => cert.min_eigenvalue,
            CheckCertificate::Scalar { margin, .. } => *margin,
        }
    }
}

/// Result of one Schur-product check.
#[derive(Debug, Clone, Serialize)]
pub struct SchurCheckReport {
    pub theorem_id: TheoremId,
    /// The `1/n`, `1/r`, `1/D` or `1/(2r)` factor actually used.
    pub constant_used: f64,
    pub certificate: CheckCertificate,
    /// The vector `c` for scalar-form checks.
    pub witness: Option<Vec<f64>>,
}

fn require_psd(m: &SymMatrix) -> Result<()> {
    let cert = linalg::is_psd(m, DEFAULT_PSD_TOL)?;
    if !cert.is_psd() {
        return Err(Error::NotPsd {
            min_eigenvalue: cert.min_eigenvalue,
            allowed: -cert.tolerance * cert.scale,
        });
    }
    Ok(())
}

fn diag_outer_deficit(m: &SymMatrix, constant: f64) -> Result<SymMatrix> {
    let d = m.diagonal();
    SymMatrix::from_fn(m.order(), |i, j| {
        m.get(i, j) * m.get(i, j) - constant * d[i] * d[j]
    })
}

/// `M∘M − (1/n)(diag M)(diag M)ᵀ` must be PSD for PSD `M`.
pub fn check_self_product(m: &SymMatrix) -> Result<SchurCheckReport> {
    require_psd(m)?;
    let constant = 1.0 / m.order() as f64;
    let deficit = diag_outer_deficit(m, constant)?;
    Ok(SchurCheckReport {
        theorem_id: TheoremId::SelfN,
        constant_used: constant,
        certificate: CheckCertificate::Psd(linalg::is_psd(&deficit, DEFAULT_PSD_TOL)?),
        witness: None,
    })
}

/// `M∘M − (1/r)(diag M)(diag M)ᵀ` must be PSD, with `r = psd_rank(M)`.
pub fn check_rank_bound(m: &SymMatrix) -> Result<SchurCheckReport> {
    require_psd(m)?;
    let rank = linalg::psd_rank(m, DEFAULT_PSD_TOL)?.max(1);
    let constant = 1.0 / rank as f64;
    let deficit = diag_outer_deficit(m, constant)?;
    Ok(SchurCheckReport {
        theorem_id: TheoremId::RankR,
        constant_used: constant,
        certificate: CheckCertificate::Psd(linalg::is_psd(&deficit, DEFAULT_PSD_TOL)?),
        witness: None,
    })
}

fn scalar_certificate(lhs: f64, rhs: f64) -> CheckCertificate {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    CheckCertificate::Scalar {
        lhs,
        rhs,
        margin: lhs - rhs,
        scale,
    }
}

/// Two-matrix inequality on a witness vector `c`, with `M = AAᵀ`, `N = BBᵀ`:
/// `Σ c_j c_k M_jk N_jk ≥ (1/D)(Σ c_j ⟨A^j,B^j⟩)²`.
pub fn check_two_matrix(a: &Factor, b: &Factor, c: &[f64]) -> Result<SchurCheckReport> {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}",
            a.n_rows(),
            a.n_cols(),
            b.n_rows(),
            b.n_cols()
        )));
    }
    if c.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "witness length {} vs {} rows",
            c.len(),
            a.n_rows()
        )));
    }
    let cols = a.n_cols().max(1) as f64;
    let m = a.gram()?;
    let n = b.gram()?;
    let mut lhs = 0.0;
    for j in 0..c.len() {
        for k in 0..c.len() {
            lhs += c[j] * c[k] * m.get(j, k) * n.get(j, k);
        }
    }
    let paired: f64 = (0..c.len()).map(|j| c[j] * a.row_dot(b, j)).sum();
    let constant = 1.0 / cols;
    let rhs = constant * paired * paired;
    Ok(SchurCheckReport {
        theorem_id: TheoremId::TwoMatrix,
        constant_used: constant,
        certificate: scalar_certificate(lhs, rhs),
        witness: Some(c.to_vec()),
    })
}

/// Combined inequality with `M = AAᵀ = BBᵀ` of rank r:
/// `Σ c_j c_k M²_jk ≥ (1/(2r))(Σ c_j ⟨A^j,B^j⟩)²`.
///
/// Both factorizations are verified up to `1e-8 · scale(M)` before the
/// inequality is evaluated.
pub fn check_combined(m: &SymMatrix, a: &Factor, b: &Factor, c: &[f64]) -> Result<SchurCheckReport> {
    check_combined_with_constant(m, a, b, c, false)
}

/// Exploration hook: run the combined check with the conjectured sharper
/// constant `1/r` instead of `1/(2r)`. Violations are reported through the
/// certificate margin, never asserted absent.
pub fn check_combined_tight(
    m: &SymMatrix,
    a: &Factor,
    b: &Factor,
    c: &[f64],
) -> Result<SchurCheckReport> {
    check_combined_with_constant(m, a, b, c, true)
}

fn check_combined_with_constant(
    m: &SymMatrix,
    a: &Factor,
    b: &Factor,
    c: &[f64],
    tight: bool,
) -> Result<SchurCheckReport> {
    let allowed = 1e-8 * m.scale();
    for (name, f) in [("A", a), ("B", b)] {
        if f.n_rows() != m.order() {
            return Err(Error::DimensionMismatch(format!(
                "{name} has {} rows, M has order {}",
                f.n_rows(),
                m.order()
            )));
        }
        let residual = f.gram()?.max_abs_diff(m)?;
        if residual > allowed {
            return Err(Error::FactorizationMismatch { residual, allowed });
        }
    }
    if c.len() != m.order() {
        return Err(Error::DimensionMismatch(format!(
            "witness length {} vs order {}",
            c.len(),
            m.order()
        )));
    }
    let rank = linalg::psd_rank(m, DEFAULT_PSD_TOL)?.max(1);
    let constant = if tight {
        1.0 / rank as f64
    } else {
        1.0 / (2 * rank) as f64
    };
    let mut lhs = 0.0;
    for j in 0..c.len() {
        for k in 0..c.len() {
            let mjk = m.get(j, k);
            lhs += c[j] * c[k] * mjk * mjk;
        }
    }
    let paired: f64 = (0..c.len()).map(|j| c[j] * a.row_dot(b, j)).sum();
    let rhs = constant * paired * paired;
    Ok(SchurCheckReport {
        theorem_id: TheoremId::Combined2R,
        constant_used: constant,
        certificate: scalar_certificate(lhs, rhs),
        witness: Some(c.to_vec()),
    })
}

/// Configuration for a randomized check suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub theorem: TheoremId,
    /// Matrix order n.
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    /// Column count D for factor-based theorems; defaults to `order` if 0.
    pub factor_cols: usize,
    /// Use the conjectured 1/r constant in the combined check.
    pub experimental_tight: bool,
}

/// Aggregate over a randomized suite, reduced deterministically.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub theorem: TheoremId,
    pub trials: usize,
    /// Smallest normalized margin observed: min-eigenvalue-per-scale for PSD
    /// checks, (lhs − rhs)/scale for scalar checks.
    pub worst_margin: f64,
    /// Trials whose certificate failed `holds()`.
    pub violations: usize,
}

fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    // Gram-Schmidt on a random Gaussian-ish matrix; retries are not needed at
    // these dimensions for continuous inputs.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        for u in &basis {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

fn suite_trial(config: &SuiteConfig, trial: usize) -> Result<SchurCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64 + 1);
    let n = config.order;
    let cols = if config.factor_cols == 0 {
        n
    } else {
        config.factor_cols
    };
    let gauss = |rng: &mut ChaCha8Rng| rng.random::<f64>() * 2.0 - 1.0;

    match config.theorem {
        TheoremId::SelfN | TheoremId::RankR => {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..cols).map(|_| gauss(&mut rng)).collect())
                .collect();
            let m = Factor::from_rows(rows)?.gram()?;
            if config.theorem == TheoremId::SelfN {
                check_self_product(&m)
            } else {
                check_rank_bound(&m)
            }
        }
        TheoremId::TwoMatrix => {
            let mk = |rng: &mut ChaCha8Rng| -> Result<Factor> {
                Factor::from_rows(
                    (0..n)
                        .map(|_| (0..cols).map(|_| gauss(rng)).collect())
                        .collect(),
                )
            };
            let a = mk(&mut rng)?;
            let b = mk(&mut rng)?;
            let c: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            check_two_matrix(&a, &b, &c)
        }
        TheoremId::Combined2R => {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..cols).map(|_| gauss(&mut rng)).collect())
                .collect();
            let a = Factor::from_rows(rows)?;
            let m = a.gram()?;
            // B = A·Q with orthogonal Q keeps BBᵀ = M while decorrelating rows.
            let q = random_orthogonal(cols, &mut rng);
            let b = a.mul_square(&q)?;
            let c: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            if config.experimental_tight {
                check_combined_tight(&m, &a, &b, &c)
            } else {
                check_combined(&m, &a, &b, &c)
            }
        }
    }
}

/// Run `trials` independent randomized checks; trial streams derive from
/// `(seed, trial index)`, so the summary is identical at any parallel degree.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteSummary> {
    if config.order == 0 {
        return Err(Error::InvalidParameter("suite order must be positive".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidParameter("suite needs at least one trial".into()));
    }
    let reports: Vec<SchurCheckReport> = (0..config.trials)
        .into_par_iter()
        .map(|t| suite_trial(config, t))
        .collect::<Result<_>>()?;
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for report in &reports {
        let normalized = match &report.certificate {
            CheckCertificate::Psd(cert) => cert.min_eigenvalue / cert.scale,
            CheckCertificate::Scalar { margin, scale, .. } => margin / scale,
        };
        worst = worst.min(normalized);
        if !report.certificate.holds() {
            violations += 1;
        }
    }
    Ok(SuiteSummary {
        theorem: config.theorem,
        trials: config.trials,
        worst_margin: worst,
        violations,
    })
}
