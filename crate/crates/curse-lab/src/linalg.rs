//! Dense symmetric matrix kernel: eigendecomposition, PSD certification,
//! pseudo-inverse quadratic forms, Schur products.
//!
//! Everything downstream (Gram systems, Schur-product checks, PSD
//! certificates) reduces to the handful of operations in this module.
//! Eigendecomposition is the single PSD oracle, so every verdict carries an
//! auditable minimum eigenvalue.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative tolerance for PSD verdicts, against `scale = max(1, ‖A‖_max)`.
///
/// Gram matrices of near-coincident nodes are nearly singular; their smallest
/// eigenvalues land a little below zero in floating point.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Relative cutoff for the eigenvalue pseudo-inverse: eigenvalues
/// `≤ PINV_CUTOFF · λ_max` are treated as zero.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Symmetric real matrix with exact `A[i][j] == A[j][i]` storage.
///
/// Construction symmetrizes by averaging, so the invariant holds bit-exactly
/// no matter how the input was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>, // row-major, full storage
}

impl SymMatrix {
    /// Build from full rows; off-diagonal pairs are averaged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("order must be at least 1".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "expected square {n}x{n} input"
            )));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (rows[i][j] + rows[j][i]);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    /// Build from a generator evaluated once per unordered pair `(i, j)`,
    /// `i ≤ j`; the value is mirrored, so symmetry is structural.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("order must be at least 1".into()));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Diagonal as a vector.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `max(1, ‖A‖_max)` — the reference scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.data.iter().fold(1.0_f64, |m, &v| m.max(v.abs()))
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.n, other.n
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    fn has_finite_entries(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Rectangular factor `F` (n rows, D columns), as in `M = FFᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    rows: Vec<Vec<f64>>,
    cols: usize,
}

impl Factor {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidMatrix("factor needs at least one row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidMatrix("ragged factor rows".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.rows[j]
    }

    /// `⟨A^j, B^j⟩` — dot product of matching rows.
    pub fn row_dot(&self, other: &Factor, j: usize) -> f64 {
        self.rows[j]
            .iter()
            .zip(&other.rows[j])
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Gram matrix `FFᵀ`.
    pub fn gram(&self) -> Result<SymMatrix> {
        SymMatrix::from_fn(self.n_rows(), |i, j| {
            self.rows[i]
                .iter()
                .zip(&self.rows[j])
                .map(|(a, b)| a * b)
                .sum()
        })
    }

    /// Right-multiply by a D×D matrix given as rows: `F · Q`.
    pub fn mul_square(&self, q: &[Vec<f64>]) -> Result<Factor> {
        if q.len() != self.cols || q.iter().any(|r| r.len() != self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "square factor of side {} required",
                self.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..self.cols)
                    .map(|c| (0..self.cols).map(|k| r[k] * q[k][c]).sum())
                    .collect()
            })
            .collect();
        Factor::from_rows(rows)
    }
}

/// PSD verdict for a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Psd,
    NotPsd,
}

/// Outcome of a PSD test: the verdict plus the numbers it was derived from.
#[derive(Debug, Clone, Serialize)]
pub struct PsdCertificate {
    pub min_eigenvalue: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        self.verdict == Verdict::Psd
    }
}

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector paired with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    /// `‖A − VΛVᵀ‖_max` against the given matrix.
    pub fn reconstruction_error(&self, a: &SymMatrix) -> f64 {
        let n = a.order();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
                    s += lam * v[i] * v[j];
                }
                worst = worst.max((s - a.get(i, j)).abs());
            }
        }
        worst
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues and orthonormal
/// eigenvectors.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenSystem> {
    if !a.has_finite_entries() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let decomp = nalgebra::SymmetricEigen::new(a.to_dmatrix());
    let n = a.order();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomp.eigenvalues[i]
            .partial_cmp(&decomp.eigenvalues[j])
            .expect("eigenvalues of a finite symmetric matrix are finite")
    });
    let eigenvalues = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| decomp.eigenvectors.column(k).iter().copied().collect())
        .collect();
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Test positive semi-definiteness: PSD iff `λ_min ≥ −tol · scale(A)`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<PsdCertificate> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "PSD tolerance must be nonnegative, got {tol}"
        )));
    }
    let eig = sym_eigen(a)?;
    let min_eigenvalue = eig.eigenvalues[0];
    let scale = a.scale();
    let verdict = if min_eigenvalue >= -tol * scale {
        Verdict::Psd
    } else {
        Verdict::NotPsd
    };
    Ok(PsdCertificate {
        min_eigenvalue,
        scale,
        tolerance: tol,
        verdict,
    })
}

/// `bᵀG⁺b` together with the minimizing weights `c = G⁺b`.
#[derive(Debug, Clone)]
pub struct QuadForm {
    pub value: f64,
    pub weights: Vec<f64>,
}

/// Pseudo-inverse quadratic form `bᵀG⁺b` for a PSD matrix `G`, with the
/// default PSD gate tolerance.
///
/// This is `sup_c (c·b)² / (cᵀGc)` when `b` lies in the range of `G`;
/// eigenvalues `≤ PINV_CUTOFF · λ_max` are zeroed so that coincident-node
/// Gram matrices degrade gracefully instead of blowing up.
pub fn quad_form_pinv(g: &SymMatrix, b: &[f64]) -> Result<QuadForm> {
    quad_form_pinv_with_tol(g, b, DEFAULT_PSD_TOL)
}

/// As [`quad_form_pinv`], with an explicit PSD gate tolerance.
pub fn quad_form_pinv_with_tol(g: &SymMatrix, b: &[f64], psd_tol: f64) -> Result<QuadForm> {
    let n = g.order();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "G is {}x{} but b has length {}",
            n,
            n,
            b.len()
        )));
    }
    let eig = sym_eigen(g)?;
    let scale = g.scale();
    let allowed = -psd_tol * scale;
    if eig.eigenvalues[0] < allowed {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.eigenvalues[0],
            allowed,
        });
    }
    let lambda_max = eig.eigenvalues[n - 1].max(0.0);
    let cutoff = PINV_CUTOFF * lambda_max;
    let mut value = 0.0;
    let mut weights = vec![0.0; n];
    for (lam, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *lam <= cutoff {
            continue;
        }
        let proj: f64 = v.iter().zip(b).map(|(vi, bi)| vi * bi).sum();
        value += proj * proj / lam;
        let coeff = proj / lam;
        for (w, vi) in weights.iter_mut().zip(v) {
            *w += coeff * vi;
        }
    }
    Ok(QuadForm { value, weights })
}

/// Entrywise (Schur/Hadamard) product of two symmetric matrices.
pub fn schur_product(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            a.order(),
            b.order()
        )));
    }
    SymMatrix::from_fn(a.order(), |i, j| a.get(i, j) * b.get(i, j))
}

/// Numerical rank of a PSD matrix: the number of eigenvalues `> tol · λ_max`.
pub fn psd_rank(a: &SymMatrix, tol: f64) -> Result<usize> {
    let (eig, _) = psd_gated_eigen(a, tol)?;
    let lambda_max = eig.eigenvalues[a.order() - 1];
    if lambda_max <= 0.0 {
        return Ok(0);
    }
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&lam| lam > tol * lambda_max)
        .count())
}

/// Factor a PSD matrix as `A = FFᵀ` with `psd_rank(A, tol)` columns.
pub fn psd_factor(a: &SymMatrix, tol: f64) -> Result<Factor> {
    let (eig, _) = psd_gated_eigen(a, tol)?;
    let n = a.order();
    let lambda_max = eig.eigenvalues[n - 1];
    // Columns ordered by decreasing eigenvalue.
    let kept: Vec<usize> = (0..n)
        .rev()
        .filter(|&k| lambda_max > 0.0 && eig.eigenvalues[k] > tol * lambda_max)
        .collect();
    let rows = (0..n)
        .map(|i| {
            kept.iter()
                .map(|&k| eig.eigenvalues[k].sqrt() * eig.eigenvectors[k][i])
                .collect()
        })
        .collect::<Vec<Vec<f64>>>();
    // Rank zero still needs a well-formed shape: n x 0.
    Factor::from_rows(rows)
}

fn psd_gated_eigen(a: &SymMatrix, tol: f64) -> Result<(EigenSystem, f64)> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let eig = sym_eigen(a)?;
    let allowed = -tol * a.scale();
    if eig.eigenvalues[0] < allowed {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.eigenvalues[0],
            allowed,
        });
    }
    Ok((eig, allowed))
}
