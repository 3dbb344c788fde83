//! Tensor-product problems: kernel and representer evaluation, Gram
//! assembly, and the exact worst-case error of quadrature at given nodes.
//!
//! For nodes `X = {x_1, …, x_n}` the squared radius of information is
//!
//! ```text
//! e(X)² = ‖h‖² − sup_c (Σ c_j h(x_j))² / (Σ c_j c_k K(x_j, x_k))
//!       = ‖h‖² − bᵀ G⁺ b
//! ```
//!
//! with `G[j][k] = K(x_j, x_k)` and `b[j] = h(x_j)`. The pseudo-inverse
//! route lets coincident or redundant nodes degrade gracefully: they add
//! zero information instead of blowing up a linear solve.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factors::{Domain, UnivariateFactor};
use crate::linalg::{self, SymMatrix};

/// Ordered list of univariate factors defining the product kernel
/// `K_d(x,y) = Π K_i(x_i, y_i)` and representer `h_d = h_1 ⊗ … ⊗ h_d`.
#[derive(Debug, Clone)]
pub struct TensorProblem {
    factors: Vec<UnivariateFactor>,
    initial_error_sq: f64,
}

impl TensorProblem {
    pub fn new(factors: Vec<UnivariateFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "a tensor problem needs at least one factor".into(),
            ));
        }
        let initial_error_sq = factors.iter().map(|f| f.representer_norm_sq()).product();
        Ok(Self {
            factors,
            initial_error_sq,
        })
    }

    /// d copies of one factor.
    pub fn homogeneous(factor: UnivariateFactor, d: usize) -> Result<Self> {
        Self::new(vec![factor; d])
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[UnivariateFactor] {
        &self.factors
    }

    pub fn domains(&self) -> Vec<Domain> {
        self.factors.iter().map(|f| f.domain()).collect()
    }

    /// `e(0, S_d)² = ‖h_d‖²`, the product of the factor norms.
    pub fn initial_error_sq(&self) -> f64 {
        self.initial_error_sq
    }

    /// Product kernel at two d-dimensional points.
    pub fn kernel_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        let mut prod = 1.0;
        for (i, factor) in self.factors.iter().enumerate() {
            prod *= factor.kernel_eval(x[i], y[i])?;
        }
        Ok(prod)
    }

    /// Product representer at a d-dimensional point.
    pub fn representer_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let mut prod = 1.0;
        for (i, factor) in self.factors.iter().enumerate() {
            prod *= factor.representer_eval(x[i])?;
        }
        Ok(prod)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, problem has dimension {}",
                x.len(),
                self.dimension()
            )));
        }
        Ok(())
    }

    /// Validate every coordinate of a point set against the factor domains.
    pub fn validate_points(&self, points: &PointSet) -> Result<()> {
        if points.dimension() != self.dimension() && points.len() > 0 {
            return Err(Error::DimensionMismatch(format!(
                "points have dimension {}, problem has dimension {}",
                points.dimension(),
                self.dimension()
            )));
        }
        for row in points.iter() {
            for (i, factor) in self.factors.iter().enumerate() {
                if !factor.domain().contains(row[i]) {
                    return Err(Error::DomainError {
                        value: row[i],
                        domain: factor.domain().to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A set of n points in d coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    rows: Vec<Vec<f64>>,
}

impl PointSet {
    /// Build from rows; all rows must share one length. An empty set carries
    /// the explicit dimension.
    pub fn new(d: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "every point must have {d} coordinates"
            )));
        }
        Ok(Self { d, rows })
    }

    pub fn empty(d: usize) -> Self {
        Self { d, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.rows[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.rows.iter()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// The finite-dimensional system Prop.-style error computation reduces to.
#[derive(Debug, Clone)]
pub struct GramSystem {
    /// `G[j][k] = K_d(x_j, x_k)`; absent for the empty point set.
    pub gram: Option<SymMatrix>,
    /// `b[j] = h_d(x_j)`.
    pub b: Vec<f64>,
    /// `‖h_d‖²`.
    pub h_norm_sq: f64,
}

/// Weighted quadrature rule `Q(f) = Σ c_j f(x_j)`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: PointSet,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(points: PointSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("non-finite weight".into()));
        }
        Ok(Self { points, weights })
    }
}

/// Assemble the Gram system for a problem at given nodes.
///
/// Each entry is the product of univariate kernel values, computed once per
/// unordered pair; assembly over rows is parallelized and bit-identical at
/// any thread count.
pub fn gram_assemble(problem: &TensorProblem, points: &PointSet) -> Result<GramSystem> {
    problem.validate_points(points)?;
    let n = points.len();
    let h_norm_sq = problem.initial_error_sq();
    if n == 0 {
        return Ok(GramSystem {
            gram: None,
            b: Vec::new(),
            h_norm_sq,
        });
    }
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (j..n)
                .map(|k| {
                    problem
                        .kernel_eval(points.point(j), points.point(k))
                        .expect("points validated")
                })
                .collect()
        })
        .collect();
    let gram = SymMatrix::from_fn(n, |j, k| upper[j][k - j])?;
    let b = points
        .iter()
        .map(|p| problem.representer_eval(p))
        .collect::<Result<Vec<f64>>>()?;
    Ok(GramSystem {
        gram: Some(gram),
        b,
        h_norm_sq,
    })
}

/// Worst-case error at fixed nodes with the optimal weights.
#[derive(Debug, Clone)]
pub struct WorstCaseError {
    /// `e(X)²` clamped to `[0, ‖h‖²]`.
    pub e_sq: f64,
    /// The unclamped value, for auditing numerical slack.
    pub raw_e_sq: f64,
    /// Optimal weights `c = G⁺ b`.
    pub weights: Vec<f64>,
}

/// `e(X)² = ‖h‖² − bᵀG⁺b` and the minimizing weights.
pub fn worst_case_error_sq(problem: &TensorProblem, points: &PointSet) -> Result<WorstCaseError> {
    let system = gram_assemble(problem, points)?;
    let Some(gram) = &system.gram else {
        return Ok(WorstCaseError {
            e_sq: system.h_norm_sq,
            raw_e_sq: system.h_norm_sq,
            weights: Vec::new(),
        });
    };
    let quad = linalg::quad_form_pinv(gram, &system.b)?;
    let raw = system.h_norm_sq - quad.value;
    Ok(WorstCaseError {
        e_sq: raw.clamp(0.0, system.h_norm_sq),
        raw_e_sq: raw,
        weights: quad.weights,
    })
}

/// Squared worst-case error of an explicit rule:
/// `e(Q)² = ‖h‖² − 2 Σ c_j h(x_j) + Σ c_j c_k K(x_j, x_k)`.
pub fn error_of_rule(problem: &TensorProblem, rule: &QuadratureRule) -> Result<f64> {
    let system = gram_assemble(problem, &rule.points)?;
    let c = &rule.weights;
    let mut value = system.h_norm_sq;
    for (cj, bj) in c.iter().zip(&system.b) {
        value -= 2.0 * cj * bj;
    }
    if let Some(gram) = &system.gram {
        for j in 0..c.len() {
            for k in 0..c.len() {
                value += c[j] * c[k] * gram.get(j, k);
            }
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::UnivariateFactor;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn trig_problem(d: usize) -> TensorProblem {
        TensorProblem::homogeneous(UnivariateFactor::trig1(), d).unwrap()
    }

    #[test]
    fn kernel_product_structure() {
        let p1 = trig_problem(1);
        let f = UnivariateFactor::trig1();
        assert_eq!(
            p1.kernel_eval(&[0.2], &[0.7]).unwrap(),
            f.kernel_eval(0.2, 0.7).unwrap()
        );

        let mixed = TensorProblem::new(vec![
            UnivariateFactor::trig1(),
            UnivariateFactor::affine_linear(),
        ])
        .unwrap();
        let x = [0.2, 0.3];
        let y = [0.9, 0.1];
        let expect = UnivariateFactor::trig1().kernel_eval(0.2, 0.9).unwrap()
            * UnivariateFactor::affine_linear().kernel_eval(0.3, 0.1).unwrap();
        assert!((mixed.kernel_eval(&x, &y).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn trig_diagonal_is_two_to_d() {
        // The basis-sum diagonal is 1 + cos² + sin², i.e. 2 up to one ulp per
        // coordinate.
        for d in 1..=12 {
            let p = trig_problem(d);
            let x = vec![0.37; d];
            let expect = 2.0_f64.powi(d as i32);
            let got = p.kernel_eval(&x, &x).unwrap();
            assert!((got - expect).abs() <= 1e-13 * expect, "d={d}: {got}");
        }
    }

    #[test]
    fn gram_assembly_examples() {
        let p = trig_problem(1);
        let sys = gram_assemble(&p, &PointSet::new(1, vec![vec![0.0]]).unwrap()).unwrap();
        let g = sys.gram.unwrap();
        assert_eq!(g.get(0, 0), 2.0);
        assert_eq!(sys.b, vec![1.0]);

        let sys = gram_assemble(&p, &PointSet::new(1, vec![vec![0.0], vec![0.5]]).unwrap()).unwrap();
        let g = sys.gram.unwrap();
        assert_eq!(g.get(0, 0), 2.0);
        assert!(g.get(0, 1).abs() < 1e-15);
        assert_eq!(sys.b, vec![1.0, 1.0]);

        let sys = gram_assemble(&p, &PointSet::empty(1)).unwrap();
        assert!(sys.gram.is_none());
        assert_eq!(sys.h_norm_sq, 1.0);
    }

    #[test]
    fn worst_case_single_and_pair() {
        let p = trig_problem(1);
        let one = worst_case_error_sq(&p, &PointSet::new(1, vec![vec![0.0]]).unwrap()).unwrap();
        assert!((one.e_sq - 0.5).abs() < 1e-15);
        assert!((one.weights[0] - 0.5).abs() < 1e-15);

        let two =
            worst_case_error_sq(&p, &PointSet::new(1, vec![vec![0.0], vec![0.5]]).unwrap()).unwrap();
        assert!(two.e_sq < 1e-14);
        assert!((two.weights[0] - 0.5).abs() < 1e-12);
        assert!((two.weights[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_point_error_is_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 1..=12 {
            let p = trig_problem(d);
            let x: Vec<f64> = (0..d).map(|_| rng.random()).collect();
            let e = worst_case_error_sq(&p, &PointSet::new(d, vec![x]).unwrap()).unwrap();
            let expect = 1.0 - 2.0_f64.powi(-(d as i32));
            assert!((e.e_sq - expect).abs() <= 1e-12, "d={d}: {} vs {expect}", e.e_sq);
        }
    }

    #[test]
    fn duplicate_points_add_no_information() {
        let p = trig_problem(2);
        let x = vec![0.3, 0.6];
        let single = worst_case_error_sq(&p, &PointSet::new(2, vec![x.clone()]).unwrap()).unwrap();
        let doubled =
            worst_case_error_sq(&p, &PointSet::new(2, vec![x.clone(), x]).unwrap()).unwrap();
        assert!((single.e_sq - doubled.e_sq).abs() < 1e-10);
    }

    #[test]
    fn monotone_under_point_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let p = trig_problem(3);
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.random()).collect()).collect();
            let small = worst_case_error_sq(
                &p,
                &PointSet::new(3, rows[..3].to_vec()).unwrap(),
            )
            .unwrap();
            let large = worst_case_error_sq(&p, &PointSet::new(3, rows).unwrap()).unwrap();
            assert!(large.e_sq <= small.e_sq + 1e-9);
        }
    }

    #[test]
    fn error_in_range_and_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = TensorProblem::new(vec![
            UnivariateFactor::korobov_smooth(1).unwrap(),
            UnivariateFactor::zero_boundary(),
        ])
        .unwrap();
        for _ in 0..20 {
            let mut rows: Vec<Vec<f64>> =
                (0..5).map(|_| (0..2).map(|_| rng.random()).collect()).collect();
            let a = worst_case_error_sq(&p, &PointSet::new(2, rows.clone()).unwrap()).unwrap();
            assert!(a.e_sq >= 0.0 && a.e_sq <= p.initial_error_sq());
            rows.shuffle(&mut rng);
            let b = worst_case_error_sq(&p, &PointSet::new(2, rows).unwrap()).unwrap();
            assert!((a.e_sq - b.e_sq).abs() < 1e-10);
        }
    }

    #[test]
    fn optimal_weights_reproduce_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let p = trig_problem(2);
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> =
                (0..4).map(|_| (0..2).map(|_| rng.random()).collect()).collect();
            let points = PointSet::new(2, rows).unwrap();
            let wce = worst_case_error_sq(&p, &points).unwrap();
            let rule = QuadratureRule::new(points, wce.weights.clone()).unwrap();
            let direct = error_of_rule(&p, &rule).unwrap();
            assert!((direct - wce.e_sq).abs() <= 1e-9, "{direct} vs {}", wce.e_sq);
        }
    }

    #[test]
    fn zero_weights_hit_initial_error() {
        let p = trig_problem(2);
        let points = PointSet::new(2, vec![vec![0.1, 0.2], vec![0.5, 0.9]]).unwrap();
        let rule = QuadratureRule::new(points, vec![0.0, 0.0]).unwrap();
        assert_eq!(error_of_rule(&p, &rule).unwrap(), 1.0);
    }

    #[test]
    fn product_grid_rule_is_exact_in_2d() {
        let p = trig_problem(2);
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.0, 0.5],
            vec![0.5, 0.0],
            vec![0.5, 0.5],
        ];
        let rule = QuadratureRule::new(PointSet::new(2, rows).unwrap(), vec![0.25; 4]).unwrap();
        let e = error_of_rule(&p, &rule).unwrap();
        assert!(e.abs() <= 1e-14, "grid rule error {e}");
    }

    #[test]
    fn b_lies_in_gram_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let p = trig_problem(2);
        for _ in 0..20 {
            // Include a duplicate so the Gram matrix is genuinely singular.
            let base: Vec<f64> = (0..2).map(|_| rng.random()).collect();
            let rows = vec![
                base.clone(),
                base,
                (0..2).map(|_| rng.random()).collect(),
            ];
            let sys = gram_assemble(&p, &PointSet::new(2, rows).unwrap()).unwrap();
            let gram = sys.gram.unwrap();
            let eig = crate::linalg::sym_eigen(&gram).unwrap();
            let lam_max: f64 = eig.eigenvalues.last().copied().unwrap();
            let mut residual_sq = 0.0;
            for (lam, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
                if *lam <= 1e-12 * lam_max {
                    let proj: f64 = v.iter().zip(&sys.b).map(|(a, c)| a * c).sum();
                    residual_sq += proj * proj;
                }
            }
            let b_norm = sys.b.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(residual_sq.sqrt() <= 1e-8 * b_norm.max(1.0));
        }
    }

    #[test]
    fn invalid_points_rejected() {
        let p = trig_problem(2);
        let points = PointSet::new(2, vec![vec![0.5, 1.5]]).unwrap();
        assert!(matches!(
            worst_case_error_sq(&p, &points),
            Err(Error::DomainError { .. })
        ));
        assert!(PointSet::new(2, vec![vec![0.1]]).is_err());
    }

    #[test]
    fn initial_error_is_product_of_norms() {
        let p = TensorProblem::new(vec![
            UnivariateFactor::centered_discrepancy(false),
            UnivariateFactor::centered_discrepancy(false),
        ])
        .unwrap();
        assert!((p.initial_error_sq() - 1.0 / 144.0).abs() < 1e-18);
    }
}
