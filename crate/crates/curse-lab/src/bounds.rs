//! Closed-form lower bounds on the n-th minimal worst-case error, PSD
//! certificates for specific point sets, and tractability diagnostics.
//!
//! All problems here are normalized (`‖h_d‖ = 1`), so a bound value is a
//! number at most 1. Values can go negative for large n; that means "no
//! information", not an error — the formulas are reported verbatim.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::factors::Family;
use crate::linalg::{self, PsdCertificate, SymMatrix, DEFAULT_PSD_TOL};
use crate::tensor::{gram_assemble, PointSet, QuadratureRule, TensorProblem};

/// Which closed form produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaId {
    /// `1 − n·2^{−d}` for homogeneous curse-structured products.
    Homogeneous,
    /// `1 − n·Π(1+α_i²)^{−1}` for α-weighted products.
    Weighted,
    /// `1 − 2n/‖g‖²` from the combined Schur inequality.
    Unified,
    /// `1 − n·2^{−d+1}` for rotated/phase representers.
    Rotated,
    /// `1 − 1/t` certified through diagonal dominance at threshold t.
    RandomInfo,
}

/// Parameters a bound was instantiated with.
#[derive(Debug, Clone, Serialize)]
pub enum BoundParams {
    Homogeneous { d: usize, n: u64 },
    Weighted { alphas: Vec<f64>, n: u64 },
    Unified { g_norm_sq: f64, n: u64 },
    Rotated { d: usize, n: u64 },
    RandomInfo { threshold: f64, n: u64 },
}

/// A lower bound on `e(n, S_d)²`.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub formula_id: FormulaId,
    pub bound_value: f64,
    pub params: BoundParams,
    /// True when a PSD certificate for a concrete point set accompanies the
    /// closed form.
    pub certified: bool,
}

/// One row of a tractability table: a lower bound on `n(ε, S_d)` plus the
/// weight diagnostics the necessary conditions are phrased in.
#[derive(Debug, Clone, Serialize)]
pub struct TractabilityRow {
    pub d: usize,
    pub epsilon: f64,
    pub n_lower: f64,
    pub gamma_sum: f64,
    pub gamma_sum_over_log: f64,
    pub gamma_mean: f64,
    pub regime: String,
}

/// `e(n, S_d)² ≥ 1 − n·2^{−d}` for homogeneous curse-structured tensor
/// products.
pub fn curse_bound_homogeneous(d: usize, n: u64) -> LowerBoundReport {
    assert!(d >= 1, "dimension must be at least 1");
    let bound_value = 1.0 - n as f64 * 2.0_f64.powi(-(d as i32));
    LowerBoundReport {
        formula_id: FormulaId::Homogeneous,
        bound_value,
        params: BoundParams::Homogeneous { d, n },
        certified: false,
    }
}

/// `e(n, S_d)² ≥ 1 − n·Π(1+α_i²)^{−1}` for factors with the
/// `α_i h_i = √(f_i² + g_i²)` structure.
pub fn curse_bound_weighted(alphas: &[f64], n: u64) -> Result<LowerBoundReport> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("need at least one alpha".into()));
    }
    for &a in alphas {
        if !(a > 0.0 && a <= 1.0) || !a.is_finite() {
            return Err(Error::AlphaOutOfRange(a));
        }
    }
    let product_inv: f64 = alphas.iter().map(|a| 1.0 / (1.0 + a * a)).product();
    Ok(LowerBoundReport {
        formula_id: FormulaId::Weighted,
        bound_value: 1.0 - n as f64 * product_inv,
        params: BoundParams::Weighted {
            alphas: alphas.to_vec(),
            n,
        },
        certified: false,
    })
}

/// `e(n, S)² ≥ 1 − 2n/‖g‖²` for the normalized problem with representer
/// `g/‖g‖` built from paired orthonormal bases.
pub fn unified_bound(g_norm_sq: f64, n: u64) -> Result<LowerBoundReport> {
    if !(g_norm_sq > 0.0) || !g_norm_sq.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "‖g‖² must be positive, got {g_norm_sq}"
        )));
    }
    Ok(LowerBoundReport {
        formula_id: FormulaId::Unified,
        bound_value: 1.0 - 2.0 * n as f64 / g_norm_sq,
        params: BoundParams::Unified { g_norm_sq, n },
        certified: false,
    })
}

/// `e(n, S_d)² ≥ 1 − n·2^{−d+1}` for products of plain and phase-shifted
/// trigonometric representers; the bound does not depend on the phases.
pub fn rotated_problem_bound(problem: &TensorProblem, n: u64) -> Result<LowerBoundReport> {
    for factor in problem.factors() {
        match factor.family() {
            Family::Trig1 | Family::PhaseTrig { .. } => {}
            other => {
                return Err(Error::UnsupportedFactor(format!(
                    "rotated bound needs trig1/phase_trig factors, found {other}"
                )))
            }
        }
    }
    let d = problem.dimension();
    // ‖g‖² = 2^d with identity bases; the rotated corollary is the unified
    // bound at that value.
    let report = unified_bound(2.0_f64.powi(d as i32), n)?;
    Ok(LowerBoundReport {
        formula_id: FormulaId::Rotated,
        bound_value: report.bound_value,
        params: BoundParams::Rotated { d, n },
        certified: false,
    })
}

/// A PSD certificate together with the bound it implies.
#[derive(Debug, Clone, Serialize)]
pub struct CertifiedBound {
    pub certificate: PsdCertificate,
    /// `‖h‖² − 1/α`; a valid lower bound on `e(X_n)²` when the certificate
    /// verdict is PSD.
    pub bound_value: f64,
}

/// Build `(K_d(x_j, x_k) − α·h_d(x_j)h_d(x_k))` at the given nodes and test
/// positive semi-definiteness. A PSD verdict certifies
/// `e(X_n)² ≥ ‖h‖² − 1/α`.
pub fn psd_certificate(
    problem: &TensorProblem,
    points: &PointSet,
    alpha: f64,
) -> Result<CertifiedBound> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let system = gram_assemble(problem, points)?;
    let bound_value = system.h_norm_sq - 1.0 / alpha;
    let Some(gram) = &system.gram else {
        // No points: the empty certificate is vacuously PSD.
        return Ok(CertifiedBound {
            certificate: PsdCertificate {
                min_eigenvalue: 0.0,
                scale: 1.0,
                tolerance: DEFAULT_PSD_TOL,
                verdict: linalg::Verdict::Psd,
            },
            bound_value,
        });
    };
    let b = &system.b;
    let shifted = SymMatrix::from_fn(gram.order(), |j, k| {
        gram.get(j, k) - alpha * b[j] * b[k]
    })?;
    Ok(CertifiedBound {
        certificate: linalg::is_psd(&shifted, DEFAULT_PSD_TOL)?,
        bound_value,
    })
}

/// Varying-smoothness bound: `1 − n·Π_{i≤d}(1 + 2(2π)^{−2r_i})^{−1}` for a
/// nondecreasing sequence of positive integer smoothness orders.
pub fn korobov_varying_bound(r_sequence: &[u32], d: usize, n: u64) -> Result<LowerBoundReport> {
    validate_r_sequence(r_sequence)?;
    if d == 0 || r_sequence.len() < d {
        return Err(Error::InvalidParameter(format!(
            "need r values for all {d} coordinates, got {}",
            r_sequence.len()
        )));
    }
    let alphas: Vec<f64> = r_sequence[..d]
        .iter()
        .map(|&r| 2.0_f64.sqrt() * (2.0 * PI).powi(-(r as i32)))
        .collect();
    curse_bound_weighted(&alphas, n)
}

fn validate_r_sequence(r: &[u32]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::InvalidParameter("empty smoothness sequence".into()));
    }
    if r[0] == 0 {
        return Err(Error::InvalidParameter(
            "smoothness orders must be positive integers".into(),
        ));
    }
    if r.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "smoothness sequence r must be nondecreasing".into(),
        ));
    }
    Ok(())
}

/// Advisory growth-regime tag for a finite prefix of the smoothness
/// sequence. Limits are not computable from finite data; the tag records the
/// prefix length it was computed from.
pub fn korobov_varying_regime(r_sequence: &[u32]) -> Result<String> {
    validate_r_sequence(r_sequence)?;
    let len = r_sequence.len();
    let r_last = *r_sequence.last().expect("nonempty") as f64;
    let tail_flat = len >= 2 && r_sequence[len / 2..].windows(2).all(|w| w[0] == w[1]);
    // ln(i)/r_i at the end of the prefix, versus the strong-tractability
    // threshold 2·ln(2π).
    let ratio = (len as f64).ln() / r_last;
    let threshold = 2.0 * (2.0 * PI).ln();
    let label = if tail_flat || ratio < 1e-3 {
        "bounded-smoothness: curse regime"
    } else if ratio > threshold {
        "ln(i)/r_i above 2ln(2pi): not polynomially tractable"
    } else {
        "intermediate growth"
    };
    Ok(format!("{label} (prefix length {len})"))
}

/// Weighted-Korobov tractability diagnostics: for each supplied weight row
/// `γ_{d,·}` (the row length is d), a lower bound on `n(ε, S_d)` and the
/// three statistics the necessary conditions are phrased in.
pub fn korobov_weighted_diagnostics(
    s: f64,
    gamma_rows: &[Vec<f64>],
    eps: f64,
) -> Result<Vec<TractabilityRow>> {
    if !(s > 0.5) {
        return Err(Error::InvalidParameter(format!(
            "smoothness s must exceed 1/2, got {s}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    let factor = 2.0 * (2.0 * PI).powf(-2.0 * s);
    let mut rows = Vec::with_capacity(gamma_rows.len());
    for gammas in gamma_rows {
        let d = gammas.len();
        if d == 0 {
            return Err(Error::InvalidParameter("empty weight row".into()));
        }
        if gammas.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights gamma must be positive and finite".into(),
            ));
        }
        let n_lower: f64 =
            (1.0 - eps * eps) * gammas.iter().map(|&g| 1.0 + factor * g).product::<f64>();
        let gamma_sum: f64 = gammas.iter().sum();
        let gamma_sum_over_log = gamma_sum / ((d as f64) + 1.0).ln();
        let gamma_mean = gamma_sum / d as f64;
        rows.push(TractabilityRow {
            d,
            epsilon: eps,
            n_lower,
            gamma_sum,
            gamma_sum_over_log,
            gamma_mean,
            regime: String::new(),
        });
    }
    // Advisory regime tag from the finite prefix: look at the tail growth of
    // the weight sums between the middle and the end of the supplied rows.
    let prefix = rows.len();
    let tag = if prefix >= 2 {
        let mid = &rows[prefix / 2];
        let last = &rows[prefix - 1];
        let tail_growth = (last.gamma_sum - mid.gamma_sum) / last.gamma_sum.max(1e-12);
        let log_ratio_change = (last.gamma_sum_over_log - mid.gamma_sum_over_log).abs()
            / last.gamma_sum_over_log.max(1e-12);
        if tail_growth <= 0.05 {
            "gamma sums flatten over prefix: consistent with strong polynomial tractability"
        } else if log_ratio_change <= 0.05 {
            "gamma sums grow like log d over prefix: consistent with polynomial tractability"
        } else {
            "gamma sums grow superlogarithmically over prefix: curse-consistent"
        }
    } else {
        "single dimension: no growth information"
    };
    for row in &mut rows {
        row.regime = format!("{tag} (prefix length {prefix})");
    }
    Ok(rows)
}

/// `n(ε, S_d) ≥ (1−ε²)·Π(1+α_i²)`.
pub fn min_nodes_for_eps(alphas: &[f64], eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    for &a in alphas {
        if !(a > 0.0 && a <= 1.0) || !a.is_finite() {
            return Err(Error::AlphaOutOfRange(a));
        }
    }
    let product: f64 = alphas.iter().map(|a| 1.0 + a * a).product();
    Ok((1.0 - eps * eps) * product)
}

/// The exact-integration threshold statement for a curse-structured problem.
#[derive(Debug, Clone)]
pub struct ExactnessThreshold {
    pub d: usize,
    /// Largest node count that provably cannot integrate exactly: `2^d − 1`.
    pub n_below: u64,
    /// The bound value at that count: `2^{−d}`.
    pub bound_value: f64,
    /// A 2^d-point product rule that is exact, where a closed form exists.
    pub witness: Option<QuadratureRule>,
}

/// For problems whose factors all carry the α = 1 curse structure:
/// `e(2^d − 1, S_d)² ≥ 2^{−d} > 0`, while `2^d` points suffice wherever a
/// product rule witness is known.
pub fn exact_integration_threshold(problem: &TensorProblem) -> Result<ExactnessThreshold> {
    let d = problem.dimension();
    if d > 60 {
        return Err(Error::InvalidParameter(format!(
            "2^{d} exceeds the supported node-count range"
        )));
    }
    for factor in problem.factors() {
        if !factor.is_curse_structured() {
            return Err(Error::UnsupportedFactor(format!(
                "factor {} lacks the alpha = 1 curse structure",
                factor.family()
            )));
        }
    }
    let n_below = (1u64 << d) - 1;
    let bound_value = 2.0_f64.powi(-(d as i32));

    // Product witness: tensorize the per-factor two-point rules.
    let per_factor: Option<Vec<([f64; 2], [f64; 2])>> = problem
        .factors()
        .iter()
        .map(|f| f.two_point_rule())
        .collect();
    let witness = match per_factor {
        Some(rules) if d <= 16 => {
            let count = 1usize << d;
            let mut rows = Vec::with_capacity(count);
            let mut weights = Vec::with_capacity(count);
            for mask in 0..count {
                let mut point = Vec::with_capacity(d);
                let mut weight = 1.0;
                for (i, (nodes, ws)) in rules.iter().enumerate() {
                    let pick = (mask >> i) & 1;
                    point.push(nodes[pick]);
                    weight *= ws[pick];
                }
                rows.push(point);
                weights.push(weight);
            }
            Some(QuadratureRule::new(PointSet::new(d, rows)?, weights)?)
        }
        _ => None,
    };
    Ok(ExactnessThreshold {
        d,
        n_below,
        bound_value,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::UnivariateFactor;
    use crate::tensor::error_of_rule;

    #[test]
    fn homogeneous_values() {
        assert_eq!(curse_bound_homogeneous(2, 1).bound_value, 0.75);
        assert_eq!(curse_bound_homogeneous(5, 0).bound_value, 1.0);
        assert_eq!(curse_bound_homogeneous(10, 512).bound_value, 0.5);
    }

    #[test]
    fn weighted_specializes_to_homogeneous() {
        for d in 1..=8 {
            for n in [0u64, 1, 3, 17] {
                let weighted = curse_bound_weighted(&vec![1.0; d], n).unwrap();
                let homo = curse_bound_homogeneous(d, n);
                assert!((weighted.bound_value - homo.bound_value).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn weighted_rejects_bad_alpha() {
        assert!(matches!(
            curse_bound_weighted(&[0.5, 1.2], 1),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            curse_bound_weighted(&[0.0], 1),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn weighted_monotone_in_n_and_alpha() {
        let base = curse_bound_weighted(&[0.5, 0.5], 4).unwrap().bound_value;
        let more_n = curse_bound_weighted(&[0.5, 0.5], 5).unwrap().bound_value;
        let more_alpha = curse_bound_weighted(&[0.5, 0.9], 4).unwrap().bound_value;
        assert!(more_n < base);
        assert!(more_alpha > base);
    }

    #[test]
    fn unified_and_rotated_agree() {
        let problem = TensorProblem::new(vec![
            UnivariateFactor::phase_trig(0.0).unwrap(),
            UnivariateFactor::phase_trig(std::f64::consts::FRAC_PI_2).unwrap(),
        ])
        .unwrap();
        let rotated = rotated_problem_bound(&problem, 1).unwrap();
        assert!((rotated.bound_value - 0.5).abs() < 1e-15);
        let unified = unified_bound(4.0, 1).unwrap();
        assert!((rotated.bound_value - unified.bound_value).abs() < 1e-15);

        let trig3 =
            TensorProblem::homogeneous(UnivariateFactor::trig1(), 3).unwrap();
        assert!((rotated_problem_bound(&trig3, 1).unwrap().bound_value - 0.75).abs() < 1e-15);
        assert_eq!(rotated_problem_bound(&trig3, 0).unwrap().bound_value, 1.0);
    }

    #[test]
    fn unified_boundary_cases() {
        assert_eq!(unified_bound(4.0, 2).unwrap().bound_value, 0.0);
        assert_eq!(unified_bound(8.0, 0).unwrap().bound_value, 1.0);
        assert!(unified_bound(0.0, 1).is_err());
    }

    #[test]
    fn rotated_rejects_other_factors() {
        let p = TensorProblem::new(vec![UnivariateFactor::affine_linear()]).unwrap();
        assert!(matches!(
            rotated_problem_bound(&p, 1),
            Err(Error::UnsupportedFactor(_))
        ));
    }

    #[test]
    fn korobov_varying_values() {
        // r ≡ 1, d = 2, n = 1: 1 − (1 + 2(2π)^{−2})^{−2}.
        let expect = 1.0 - (1.0 + 2.0 * (2.0 * PI).powi(-2)).powi(-2);
        let got = korobov_varying_bound(&[1, 1], 2, 1).unwrap().bound_value;
        assert!((got - expect).abs() < 1e-15);

        // Huge smoothness: the weighted product tends to 1, so the bound
        // tends to 1 − n.
        let got = korobov_varying_bound(&[25, 25, 25], 3, 2).unwrap().bound_value;
        assert!((got - (1.0 - 2.0)).abs() < 1e-9);

        assert_eq!(korobov_varying_bound(&[1, 2], 2, 0).unwrap().bound_value, 1.0);
    }

    #[test]
    fn korobov_varying_validation() {
        assert!(korobov_varying_bound(&[2, 1], 2, 1).is_err());
        assert!(korobov_varying_bound(&[0, 1], 2, 1).is_err());
        assert!(korobov_varying_bound(&[1], 2, 1).is_err());
        assert!(korobov_varying_regime(&[3, 2]).is_err());
    }

    #[test]
    fn korobov_varying_bounded_r_floor() {
        // With r_i ≤ R the bound is at least 1 − n(1+2(2π)^{−2R})^{−d}.
        let r = [1u32, 2, 2, 3, 3, 3];
        let d = 6;
        let n = 10;
        let cap = 3;
        let floor =
            1.0 - n as f64 * (1.0 + 2.0 * (2.0 * PI).powi(-2 * cap)).powi(-(d as i32));
        let got = korobov_varying_bound(&r, d, n).unwrap().bound_value;
        assert!(got >= floor - 1e-12);
    }

    #[test]
    fn korobov_weighted_diagnostic_rows() {
        // Constant weights γ = 1 at s = 1, d = 4, ε = 1/2.
        let rows = korobov_weighted_diagnostics(1.0, &[vec![1.0; 4]], 0.5).unwrap();
        let expect = 0.75 * (1.0 + 2.0 * (2.0 * PI).powi(-2)).powi(4);
        assert!((rows[0].n_lower - expect).abs() < 1e-12);
        assert_eq!(rows[0].d, 4);

        // γ_{d,j} = 1/j²: sums bounded, flagged as SPT-consistent.
        let gamma_rows: Vec<Vec<f64>> = (1..=30)
            .map(|d| (1..=d).map(|j| 1.0 / (j * j) as f64).collect())
            .collect();
        let rows = korobov_weighted_diagnostics(1.0, &gamma_rows, 0.5).unwrap();
        assert!(rows.last().unwrap().gamma_sum < PI * PI / 6.0);
        assert!(
            rows[0].regime.contains("strong polynomial"),
            "regime: {}",
            rows[0].regime
        );
        // Constant weights fail every summability condition.
        let const_rows: Vec<Vec<f64>> = (1..=30).map(|d| vec![1.0; d]).collect();
        let rows = korobov_weighted_diagnostics(1.0, &const_rows, 0.5).unwrap();
        assert!(rows[0].regime.contains("curse"), "regime: {}", rows[0].regime);

        // Tiny weights: n_lower approaches 1 − ε².
        let rows = korobov_weighted_diagnostics(1.0, &[vec![1e-12; 3]], 0.5).unwrap();
        assert!((rows[0].n_lower - 0.75).abs() < 1e-9);
    }

    #[test]
    fn korobov_weighted_validation() {
        assert!(korobov_weighted_diagnostics(0.5, &[vec![1.0]], 0.5).is_err());
        assert!(korobov_weighted_diagnostics(1.0, &[vec![1.0]], 1.5).is_err());
        assert!(korobov_weighted_diagnostics(1.0, &[vec![-1.0]], 0.5).is_err());
    }

    #[test]
    fn min_nodes_values() {
        let n = min_nodes_for_eps(&vec![1.0; 10], 0.5).unwrap();
        assert!((n - 768.0).abs() < 1e-9);
        assert!(min_nodes_for_eps(&[1.0], 1.5).is_err());
        assert!(min_nodes_for_eps(&[1.0], 0.0).is_err());
        // ε → 1⁻ drives the requirement to zero.
        let n = min_nodes_for_eps(&[1.0], 0.999_999).unwrap();
        assert!(n < 0.01);
        let n = min_nodes_for_eps(&[1.0], 1e-9).unwrap();
        assert!((n - 2.0).abs() < 1e-6);
    }

    #[test]
    fn exactness_threshold_trig() {
        let p = TensorProblem::homogeneous(UnivariateFactor::trig1(), 2).unwrap();
        let t = exact_integration_threshold(&p).unwrap();
        assert_eq!(t.n_below, 3);
        assert!((t.bound_value - 0.25).abs() < 1e-15);
        let witness = t.witness.expect("trig witness exists");
        assert_eq!(witness.points.len(), 4);
        let err = error_of_rule(&p, &witness).unwrap();
        assert!(err.abs() <= 1e-12, "witness error {err}");
    }

    #[test]
    fn exactness_witness_per_family() {
        let factors: Vec<UnivariateFactor> = vec![
            UnivariateFactor::trig1(),
            UnivariateFactor::weighted_trig(0.35).unwrap(),
            UnivariateFactor::phase_trig(1.3).unwrap(),
            UnivariateFactor::interval_poly2(),
            UnivariateFactor::gauss_poly2(true),
            UnivariateFactor::zero_boundary(),
            UnivariateFactor::korobov_smooth(2).unwrap(),
        ];
        for factor in factors {
            let (nodes, weights) = factor
                .two_point_rule()
                .unwrap_or_else(|| panic!("rule for {}", factor.family()));
            let p = TensorProblem::new(vec![factor.clone()]).unwrap();
            let rule = QuadratureRule::new(
                PointSet::new(1, vec![vec![nodes[0]], vec![nodes[1]]]).unwrap(),
                weights.to_vec(),
            )
            .unwrap();
            let err = error_of_rule(&p, &rule).unwrap();
            assert!(
                err.abs() <= 1e-12,
                "two-point rule for {} has error {err}",
                factor.family()
            );
        }
    }

    #[test]
    fn exactness_threshold_rejects_non_curse_factors() {
        let p = TensorProblem::new(vec![UnivariateFactor::weighted_trig(0.5).unwrap()]).unwrap();
        assert!(matches!(
            exact_integration_threshold(&p),
            Err(Error::UnsupportedFactor(_))
        ));
    }

    #[test]
    fn exactness_threshold_d1_base_case() {
        let p = TensorProblem::homogeneous(UnivariateFactor::trig1(), 1).unwrap();
        let t = exact_integration_threshold(&p).unwrap();
        assert_eq!(t.n_below, 1);
        assert!((t.bound_value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn centered_discrepancy_threshold_without_witness() {
        let p =
            TensorProblem::homogeneous(UnivariateFactor::centered_discrepancy(true), 2).unwrap();
        let t = exact_integration_threshold(&p).unwrap();
        assert!(t.witness.is_none());
        assert_eq!(t.n_below, 3);
    }

    #[test]
    fn psd_certificate_routes() {
        use crate::linalg::Verdict;
        let p = TensorProblem::homogeneous(UnivariateFactor::trig1(), 3).unwrap();
        let points = PointSet::new(
            3,
            vec![
                vec![0.1, 0.2, 0.3],
                vec![0.6, 0.9, 0.05],
                vec![0.4, 0.4, 0.4],
            ],
        )
        .unwrap();
        // α = 2^d / n certifies the homogeneous bound at these nodes.
        let alpha = 8.0 / 3.0;
        let cert = psd_certificate(&p, &points, alpha).unwrap();
        assert_eq!(cert.certificate.verdict, Verdict::Psd);
        assert!((cert.bound_value - (1.0 - 3.0 / 8.0)).abs() < 1e-15);

        // Duplicated nodes make the Gram rank-one in effect; a much larger α
        // must fail.
        let clustered = PointSet::new(3, vec![vec![0.2, 0.2, 0.2]; 4]).unwrap();
        let cert = psd_certificate(&p, &clustered, 10.0 * 8.0 / 4.0).unwrap();
        assert_eq!(cert.certificate.verdict, Verdict::NotPsd);

        // Tiny α: diagonal dominates.
        let cert = psd_certificate(&p, &points, 1e-6).unwrap();
        assert_eq!(cert.certificate.verdict, Verdict::Psd);

        assert!(psd_certificate(&p, &points, 0.0).is_err());
    }
}
