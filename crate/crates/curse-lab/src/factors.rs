//! Catalog of univariate factor spaces.
//!
//! Each factor packages one coordinate of a tensor-product problem: a
//! reproducing kernel, the representer of the integration functional, the
//! weight parameter α (where the space has the (h, f, g) structure), the
//! domain, and the kernel-diagonal supremum κ.
//!
//! Built-in factors are stored as coefficients over a declared orthonormal
//! basis and kernels are evaluated as basis sums, so orthonormality is
//! structural rather than numerical. The one exception is the decomposable
//! centered-discrepancy kernel, which has no finite basis and is evaluated
//! in closed form.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Shared basis function; evaluation is pure, so factors are freely
/// shareable across threads.
pub type BasisFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Interval a factor lives on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0, 1]`
    UnitInterval,
    /// `[-1/2, 1/2]`
    SymmetricUnit,
    /// All of ℝ, with a compact search box `[-b, b]` for node optimization.
    Real { search_box: f64 },
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::UnitInterval => (0.0..=1.0).contains(&x),
            Domain::SymmetricUnit => (-0.5..=0.5).contains(&x),
            Domain::Real { .. } => x.is_finite(),
        }
    }

    /// Finite bounds, if the domain has them.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            Domain::UnitInterval => Some((0.0, 1.0)),
            Domain::SymmetricUnit => Some((-0.5, 0.5)),
            Domain::Real { .. } => None,
        }
    }

    /// Bounds used for optimization: real bounds, or the search box.
    pub fn optimization_bounds(&self) -> (f64, f64) {
        match self {
            Domain::Real { search_box } => (-search_box, *search_box),
            _ => self.bounds().expect("bounded domain"),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitInterval => write!(f, "[0,1]"),
            Domain::SymmetricUnit => write!(f, "[-1/2,1/2]"),
            Domain::Real { search_box } => write!(f, "R(box {search_box})"),
        }
    }
}

/// Supremum of the kernel diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    /// Closed-form value.
    Exact(f64),
    /// Dense-grid maximum; an approximation from below.
    Approximate(f64),
    /// Unbounded diagonal (ℝ-domain polynomial kernels).
    Unbounded,
}

impl Kappa {
    pub fn value(&self) -> Option<f64> {
        match self {
            Kappa::Exact(v) | Kappa::Approximate(v) => Some(*v),
            Kappa::Unbounded => None,
        }
    }
}

/// Family tag, carrying the construction parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Trig1,
    WeightedTrig { alpha: f64 },
    PhaseTrig { phi: f64 },
    GaussPoly2 { normalized: bool },
    IntervalPoly2,
    ZeroBoundary,
    CenteredDiscrepancy { normalized: bool },
    KorobovSmooth { r: u32 },
    KorobovWeighted { s: f64, gamma: f64 },
    AffineLinear,
    GramBased,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Trig1 => write!(f, "trig1"),
            Family::WeightedTrig { alpha } => write!(f, "weighted_trig(alpha={alpha})"),
            Family::PhaseTrig { phi } => write!(f, "phase_trig(phi={phi})"),
            Family::GaussPoly2 { normalized } => write!(f, "gauss_poly2(normalized={normalized})"),
            Family::IntervalPoly2 => write!(f, "interval_poly2"),
            Family::ZeroBoundary => write!(f, "zero_boundary"),
            Family::CenteredDiscrepancy { normalized } => {
                write!(f, "centered_discrepancy(normalized={normalized})")
            }
            Family::KorobovSmooth { r } => write!(f, "korobov_smooth(r={r})"),
            Family::KorobovWeighted { s, gamma } => {
                write!(f, "korobov_weighted(s={s},gamma={gamma})")
            }
            Family::AffineLinear => write!(f, "affine_linear"),
            Family::GramBased => write!(f, "gram_based"),
        }
    }
}

#[derive(Clone)]
enum EvalKind {
    /// `K(x,y) = Σ ψ_k(x)ψ_k(y)`, `h(x) = Σ c_k ψ_k(x)`.
    Basis { funcs: Vec<BasisFn>, h_coeffs: Vec<f64> },
    /// Decomposable kernel `(|x−1/2| + |y−1/2| − |x−y|)/2` with representer
    /// `scale · (|x−1/2| − |x−1/2|²)/2`.
    CenteredDiscrepancy { h_scale: f64 },
}

/// One coordinate space of a tensor-product integration problem.
#[derive(Clone)]
pub struct UnivariateFactor {
    family: Family,
    domain: Domain,
    alpha: Option<f64>,
    representer_norm_sq: f64,
    kappa: Kappa,
    unit_representer: bool,
    has_hfg: bool,
    eval: EvalKind,
}

impl fmt::Debug for UnivariateFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnivariateFactor")
            .field("family", &self.family)
            .field("domain", &self.domain)
            .field("alpha", &self.alpha)
            .field("representer_norm_sq", &self.representer_norm_sq)
            .field("kappa", &self.kappa)
            .finish()
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
        Ok(alpha)
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

impl UnivariateFactor {
    /// Trigonometric polynomials of degree one on `[0,1]` with orthonormal
    /// system `1, cos(2πx), sin(2πx)`; the representer of the integral is 1.
    pub fn trig1() -> Self {
        Self::weighted_trig_tagged(1.0, Family::Trig1).expect("alpha = 1 is valid")
    }

    /// The α-weighted trigonometric factor: orthonormal system
    /// `1, α·cos(2πx), α·sin(2πx)` on `[0,1]`.
    pub fn weighted_trig(alpha: f64) -> Result<Self> {
        Self::weighted_trig_tagged(alpha, Family::WeightedTrig { alpha })
    }

    /// Korobov factor of smoothness `r ≥ 1`: the weighted trigonometric
    /// factor with `α = √2 · (2π)^{−r}`.
    pub fn korobov_smooth(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter(
                "korobov smoothness r must be a positive integer".into(),
            ));
        }
        let alpha = 2.0_f64.sqrt() * (2.0 * PI).powi(-(r as i32));
        Self::weighted_trig_tagged(alpha, Family::KorobovSmooth { r })
    }

    /// Weighted Korobov factor with smoothness `s > 1/2` and product weight
    /// `γ > 0`: `α = √(2γ) · (2π)^{−s}`.
    pub fn korobov_weighted(s: f64, gamma: f64) -> Result<Self> {
        if !(s > 0.5) {
            return Err(Error::InvalidParameter(format!(
                "korobov smoothness s must exceed 1/2, got {s}"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "korobov weight gamma must be positive, got {gamma}"
            )));
        }
        let alpha = (2.0 * gamma).sqrt() * (2.0 * PI).powf(-s);
        Self::weighted_trig_tagged(alpha, Family::KorobovWeighted { s, gamma })
    }

    fn weighted_trig_tagged(alpha: f64, family: Family) -> Result<Self> {
        let alpha = check_alpha(alpha)?;
        let funcs: Vec<BasisFn> = vec![
            Arc::new(|_| 1.0),
            Arc::new(move |x| alpha * (2.0 * PI * x).cos()),
            Arc::new(move |x| alpha * (2.0 * PI * x).sin()),
        ];
        Ok(Self {
            family,
            domain: Domain::UnitInterval,
            alpha: Some(alpha),
            representer_norm_sq: 1.0,
            kappa: Kappa::Exact(1.0 + alpha * alpha),
            unit_representer: true,
            has_hfg: true,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: vec![1.0, 0.0, 0.0],
            },
        })
    }

    /// Trigonometric factor whose representer is the phase-shifted
    /// `cos(2πx − φ)`; the kernel is the degree-one trigonometric kernel.
    pub fn phase_trig(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {phi}")));
        }
        let funcs: Vec<BasisFn> = vec![
            Arc::new(|_| 1.0),
            Arc::new(|x| (2.0 * PI * x).cos()),
            Arc::new(|x| (2.0 * PI * x).sin()),
        ];
        Ok(Self {
            family: Family::PhaseTrig { phi },
            domain: Domain::UnitInterval,
            alpha: None,
            representer_norm_sq: 1.0,
            kappa: Kappa::Exact(2.0),
            unit_representer: false,
            has_hfg: false,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: vec![0.0, phi.cos(), phi.sin()],
            },
        })
    }

    /// Polynomials of degree two under the Gaussian inner product, with
    /// kernel `(1 + xy)²` from the orthonormal system
    /// `(1+x²)/√2, (1−x²)/√2, √2·x`.
    ///
    /// `normalized` selects the unit-norm functional `S' = 2^{−1/2} S`; the
    /// raw Gaussian integral has initial error √2.
    pub fn gauss_poly2(normalized: bool) -> Self {
        let sqrt2 = 2.0_f64.sqrt();
        let funcs: Vec<BasisFn> = vec![
            Arc::new(move |x| (1.0 + x * x) / sqrt2),
            Arc::new(move |x| (1.0 - x * x) / sqrt2),
            Arc::new(move |x| sqrt2 * x),
        ];
        let (h_coeffs, norm_sq, alpha, has_hfg) = if normalized {
            (vec![1.0, 0.0, 0.0], 1.0, Some(1.0), true)
        } else {
            (vec![sqrt2, 0.0, 0.0], 2.0, None, false)
        };
        Self {
            family: Family::GaussPoly2 { normalized },
            domain: Domain::Real { search_box: 5.0 },
            alpha,
            representer_norm_sq: norm_sq,
            kappa: Kappa::Unbounded,
            unit_representer: false,
            has_hfg,
            eval: EvalKind::Basis { funcs, h_coeffs },
        }
    }

    /// Replace the optimization search box of an ℝ-domain factor.
    pub fn with_search_box(mut self, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "search box half-width must be positive, got {half_width}"
            )));
        }
        if let Domain::Real { search_box } = &mut self.domain {
            *search_box = half_width;
            Ok(self)
        } else {
            Err(Error::InvalidParameter(
                "search box only applies to R-domain factors".into(),
            ))
        }
    }

    /// Polynomials of degree two on `[-1/2, 1/2]` with the weighted Taylor
    /// norm `‖ax²+bx+c‖² = a²/72 + b²/12 + 2c²`; the representer is
    /// `1/2 + 6x²` and the diagonal supremum is `K(±1/2, ±1/2) = 8`.
    pub fn interval_poly2() -> Self {
        let funcs: Vec<BasisFn> = vec![
            Arc::new(|x| 0.5 + 6.0 * x * x),
            Arc::new(|x| 0.5 - 6.0 * x * x),
            Arc::new(|x| 12.0_f64.sqrt() * x),
        ];
        Self {
            family: Family::IntervalPoly2,
            domain: Domain::SymmetricUnit,
            alpha: Some(1.0),
            representer_norm_sq: 1.0,
            kappa: Kappa::Exact(8.0),
            unit_representer: false,
            has_hfg: true,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: vec![1.0, 0.0, 0.0],
            },
        }
    }

    /// Three-dimensional space of functions vanishing (with first
    /// derivatives) at 0 and 1, built from `sin²(πx)` and `sin²(2πx)`.
    pub fn zero_boundary() -> Self {
        let funcs: Vec<BasisFn> = vec![
            Arc::new(|x| {
                let a = (PI * x).sin();
                let b = (2.0 * PI * x).sin();
                a * a + b * b
            }),
            Arc::new(|x| {
                let a = (PI * x).sin();
                let b = (2.0 * PI * x).sin();
                a * a - b * b
            }),
            Arc::new(|x| 2.0 * (PI * x).sin() * (2.0 * PI * x).sin()),
        ];
        Self {
            family: Family::ZeroBoundary,
            domain: Domain::UnitInterval,
            alpha: Some(1.0),
            representer_norm_sq: 1.0,
            // sup of 2(sin²πx + sin²2πx)², attained at sin²πx = 5/8.
            kappa: Kappa::Exact(625.0 / 128.0),
            unit_representer: false,
            has_hfg: true,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: vec![1.0, 0.0, 0.0],
            },
        }
    }

    /// Centered-discrepancy space: absolutely continuous functions on
    /// `[0,1]` with `f(1/2) = 0` and `‖f‖ = ‖f'‖₂`. The kernel is
    /// decomposable at 1/2.
    ///
    /// With `normalized = false` the representer of the integral is exposed
    /// as-is with `‖h‖² = 1/12`; with `normalized = true` it is rescaled to
    /// unit norm.
    pub fn centered_discrepancy(normalized: bool) -> Self {
        let h_scale = if normalized { 12.0_f64.sqrt() } else { 1.0 };
        Self {
            family: Family::CenteredDiscrepancy { normalized },
            domain: Domain::UnitInterval,
            alpha: if normalized { Some(1.0) } else { None },
            representer_norm_sq: if normalized { 1.0 } else { 1.0 / 12.0 },
            kappa: Kappa::Exact(0.5),
            unit_representer: false,
            has_hfg: false,
            eval: EvalKind::CenteredDiscrepancy { h_scale },
        }
    }

    /// Affine functions on `[0,1]` with `⟨f,g⟩ = ⟨f,g⟩₂ + ⟨f',g'⟩₂`:
    /// kernel `1 + (12/13)(x−1/2)(y−1/2)`, representer 1.
    pub fn affine_linear() -> Self {
        let c = (12.0_f64 / 13.0).sqrt();
        let funcs: Vec<BasisFn> = vec![Arc::new(|_| 1.0), Arc::new(move |x| c * (x - 0.5))];
        Self {
            family: Family::AffineLinear,
            domain: Domain::UnitInterval,
            alpha: None,
            representer_norm_sq: 1.0,
            kappa: Kappa::Exact(16.0 / 13.0),
            unit_representer: true,
            has_hfg: false,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: vec![1.0, 0.0],
            },
        }
    }

    /// Build a factor on `[0,1]` from an explicit basis and inner-product
    /// moments; see [`InnerProductSpec`].
    pub fn from_inner_product(spec: &InnerProductSpec) -> Result<Self> {
        spec.build()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// The weight α of the (h, f, g) structure, where applicable.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn representer_norm_sq(&self) -> f64 {
        self.representer_norm_sq
    }

    /// Supremum of the kernel diagonal over the domain.
    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    /// True when the representer is identically 1 (the random-information
    /// dichotomy applies to products of such factors).
    pub fn has_unit_representer(&self) -> bool {
        self.unit_representer
    }

    /// True when the factor satisfies the homogeneous curse-bound structure
    /// (α = 1).
    pub fn is_curse_structured(&self) -> bool {
        matches!(self.alpha, Some(a) if (a - 1.0).abs() < 1e-15)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::DomainError {
                value: x,
                domain: self.domain.to_string(),
            })
        }
    }

    /// Kernel evaluation `K(x, y)`.
    pub fn kernel_eval(&self, x: f64, y: f64) -> Result<f64> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        Ok(match &self.eval {
            EvalKind::Basis { funcs, .. } => funcs.iter().map(|f| f(x) * f(y)).sum(),
            EvalKind::CenteredDiscrepancy { .. } => {
                0.5 * ((x - 0.5).abs() + (y - 0.5).abs() - (x - y).abs())
            }
        })
    }

    /// Representer evaluation `h(x)`.
    pub fn representer_eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match &self.eval {
            EvalKind::Basis { funcs, h_coeffs } => funcs
                .iter()
                .zip(h_coeffs)
                .map(|(f, c)| if *c == 0.0 { 0.0 } else { c * f(x) })
                .sum(),
            EvalKind::CenteredDiscrepancy { h_scale } => {
                let t = (x - 0.5).abs();
                h_scale * 0.5 * (t - t * t)
            }
        })
    }

    /// The `(h, f, g, α)` structure used by the weighted kernel identity,
    /// when the factor carries it.
    pub fn hfg(&self) -> Option<(&BasisFn, &BasisFn, &BasisFn, f64)> {
        if !self.has_hfg {
            return None;
        }
        match &self.eval {
            EvalKind::Basis { funcs, .. } if funcs.len() == 3 => {
                Some((&funcs[0], &funcs[1], &funcs[2], self.alpha?))
            }
            _ => None,
        }
    }

    /// A two-node rule that integrates the factor's space exactly, where a
    /// closed form is known. Tensorized over d coordinates this yields the
    /// exact 2^d-point product rule.
    pub fn two_point_rule(&self) -> Option<([f64; 2], [f64; 2])> {
        match &self.family {
            Family::Trig1
            | Family::WeightedTrig { .. }
            | Family::KorobovSmooth { .. }
            | Family::KorobovWeighted { .. } => Some(([0.0, 0.5], [0.5, 0.5])),
            Family::PhaseTrig { phi } => {
                let x1 = (phi / (2.0 * PI)).rem_euclid(1.0);
                let x2 = (x1 + 0.5).rem_euclid(1.0);
                Some(([x1, x2], [0.5, -0.5]))
            }
            Family::IntervalPoly2 => {
                let node = 0.5 / 3.0_f64.sqrt();
                Some(([-node, node], [0.5, 0.5]))
            }
            Family::GaussPoly2 { normalized } => {
                let w = if *normalized {
                    0.5 / 2.0_f64.sqrt()
                } else {
                    0.5
                };
                Some(([-1.0, 1.0], [w, w]))
            }
            Family::ZeroBoundary => Some(([1.0 / 3.0, 2.0 / 3.0], [1.0 / 3.0, 1.0 / 3.0])),
            Family::CenteredDiscrepancy { .. } | Family::AffineLinear | Family::GramBased => None,
        }
    }
}

/// Verifies the factorization identity behind the weighted curse bound:
/// with `a = 2^{−1/4}√(αh + f)`, `b = 2^{−1/4}·sgn(g)·√(αh − f)` and
/// `M = a⊗a + b⊗b`, the kernel satisfies
/// `K(x,y) = M(x,y)² + (1−α²)h(x)h(y)`.
///
/// Points where `|g(x)| < 1e-8` are rejected (the a/b construction is
/// sign-ambiguous there); `sgn(0)` is taken as +1. Returns the maximum
/// absolute residual over all pairs of accepted points.
pub fn weighted_kernel_identity_check(factor: &UnivariateFactor, points: &[f64]) -> Result<f64> {
    let (h, f, g, alpha) = factor.hfg().ok_or_else(|| {
        Error::NotApplicable(format!(
            "factor {} has no (h, f, g, alpha) structure",
            factor.family()
        ))
    })?;
    for &x in points {
        if !factor.domain.contains(x) {
            return Err(Error::DomainError {
                value: x,
                domain: factor.domain.to_string(),
            });
        }
    }
    let accepted: Vec<f64> = points.iter().copied().filter(|&x| g(x).abs() >= 1e-8).collect();
    if accepted.is_empty() {
        return Err(Error::InvalidParameter(
            "all sample points were rejected by the |g(x)| >= 1e-8 filter".into(),
        ));
    }
    let quarter = 2.0_f64.powf(-0.25);
    let sgn = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    let a_of = |x: f64| quarter * (alpha * h(x) + f(x)).max(0.0).sqrt();
    let b_of = |x: f64| quarter * sgn(g(x)) * (alpha * h(x) - f(x)).max(0.0).sqrt();

    let mut worst = 0.0_f64;
    for &x in &accepted {
        for &y in &accepted {
            let m = a_of(x) * a_of(y) + b_of(x) * b_of(y);
            let k = factor.kernel_eval(x, y)?;
            let residual = k - m * m - (1.0 - alpha * alpha) * h(x) * h(y);
            worst = worst.max(residual.abs());
        }
    }
    Ok(worst)
}

/// Explicit basis + inner-product moments defining a factor on `[0,1]`.
///
/// `basis[i]` lists monomial coefficients of the i-th basis polynomial in
/// ascending powers. `moment_matrix[i][j] = ⟨p_i, p_j⟩` and
/// `integration_moments[i] = ∫₀¹ p_i(x) dx` (more generally, the functional
/// applied to `p_i`). The kernel is `p(x)ᵀ A⁻¹ p(y)`.
#[derive(Debug, Clone)]
pub struct InnerProductSpec {
    pub basis: Vec<Vec<f64>>,
    pub moment_matrix: Vec<Vec<f64>>,
    pub integration_moments: Vec<f64>,
}

const KAPPA_GRID: usize = 100_000;

impl InnerProductSpec {
    fn build(&self) -> Result<UnivariateFactor> {
        let m = self.basis.len();
        if m == 0 {
            return Err(Error::InvalidParameter("basis must not be empty".into()));
        }
        if self.moment_matrix.len() != m || self.moment_matrix.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter(format!(
                "moment matrix must be {m}x{m}"
            )));
        }
        if self.integration_moments.len() != m {
            return Err(Error::InvalidParameter(format!(
                "expected {m} integration moments"
            )));
        }
        let a = SymMatrix::from_rows(&self.moment_matrix)
            .map_err(|_| Error::SingularMomentMatrix)?;
        let l = cholesky(&a)?;

        // Representer coefficients in the p-basis solve A c = moments; in the
        // orthonormalized basis ψ = L⁻¹p the coefficients are y = Lᵀc, i.e.
        // the intermediate of the triangular solve.
        let y = forward_substitute(&l, &self.integration_moments);
        let c = back_substitute_transposed(&l, &y);
        let norm_sq: f64 = y.iter().map(|v| v * v).sum();
        if !(norm_sq > 0.0) {
            return Err(Error::InvalidParameter(
                "integration moments define a zero functional".into(),
            ));
        }

        // ψ_k = Σ_j (L⁻¹)_{kj} p_j as monomial coefficient lists.
        let l_inv = lower_triangular_inverse(&l);
        let max_len = self.basis.iter().map(|p| p.len()).max().unwrap_or(1);
        let mut psi_coeffs = Vec::with_capacity(m);
        for row in &l_inv {
            let mut coeffs = vec![0.0; max_len];
            for (j, w) in row.iter().enumerate() {
                for (p, &cj) in self.basis[j].iter().enumerate() {
                    coeffs[p] += w * cj;
                }
            }
            psi_coeffs.push(coeffs);
        }
        let funcs: Vec<BasisFn> = psi_coeffs
            .iter()
            .cloned()
            .map(|coeffs| -> BasisFn { Arc::new(move |x| horner(&coeffs, x)) })
            .collect();

        // h is the identity polynomial iff Σ c_j p_j reduces to the constant 1.
        let mut h_monomial = vec![0.0; max_len];
        for (j, &cj) in c.iter().enumerate() {
            for (p, &bc) in self.basis[j].iter().enumerate() {
                h_monomial[p] += cj * bc;
            }
        }
        let unit_representer = (h_monomial[0] - 1.0).abs() <= 1e-12
            && h_monomial[1..].iter().all(|&v| v.abs() <= 1e-12);

        // Grid maximum of the diagonal; flagged approximate.
        let mut diag_max = 0.0_f64;
        for i in 0..=KAPPA_GRID {
            let x = i as f64 / KAPPA_GRID as f64;
            let d: f64 = funcs.iter().map(|f| f(x) * f(x)).sum();
            diag_max = diag_max.max(d);
        }

        Ok(UnivariateFactor {
            family: Family::GramBased,
            domain: Domain::UnitInterval,
            alpha: None,
            representer_norm_sq: norm_sq,
            kappa: Kappa::Approximate(diag_max),
            unit_representer,
            has_hfg: false,
            eval: EvalKind::Basis {
                funcs,
                h_coeffs: y,
            },
        })
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Cholesky factor L (lower triangular) of a symmetric positive definite
/// matrix; fails with `SingularMomentMatrix` otherwise.
fn cholesky(a: &SymMatrix) -> Result<Vec<Vec<f64>>> {
    let n = a.order();
    let floor = 1e-12 * a.scale();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= floor {
                    return Err(Error::SingularMomentMatrix);
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

fn forward_substitute(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    y
}

fn back_substitute_transposed(l: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

fn lower_triangular_inverse(l: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = l.len();
    let mut inv = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let y = forward_substitute(l, &e);
        for (row, &v) in y.iter().enumerate() {
            inv[row][col] = v;
        }
    }
    inv
}

/// The affine-linear inner-product specification from first principles:
/// basis `{1, x − 1/2}` with `⟨f,g⟩ = ⟨f,g⟩₂ + ⟨f',g'⟩₂` on `[0,1]`.
pub fn affine_inner_product_spec() -> InnerProductSpec {
    InnerProductSpec {
        basis: vec![vec![1.0], vec![-0.5, 1.0]],
        moment_matrix: vec![vec![1.0, 0.0], vec![0.0, 13.0 / 12.0]],
        integration_moments: vec![1.0, 0.0],
    }
}

/// Degree-two polynomials with `⟨f,g⟩ = ⟨f,g⟩₂ + ⟨f',g'⟩₂ + ⟨f'',g''⟩₂` on
/// `[0,1]`, basis `{1, x, x²}`.
pub fn degree2_sobolev_spec() -> InnerProductSpec {
    InnerProductSpec {
        basis: vec![vec![1.0], vec![0.0, 1.0], vec![0.0, 0.0, 1.0]],
        moment_matrix: vec![
            vec![1.0, 1.0 / 2.0, 1.0 / 3.0],
            vec![1.0 / 2.0, 4.0 / 3.0, 5.0 / 4.0],
            vec![1.0 / 3.0, 5.0 / 4.0, 83.0 / 15.0],
        ],
        integration_moments: vec![1.0, 1.0 / 2.0, 1.0 / 3.0],
    }
}

/// Specification whose only basis function is the constant 1: kernel ≡ 1,
/// the trivial κ = 1 factor.
pub fn constant_factor_spec() -> InnerProductSpec {
    InnerProductSpec {
        basis: vec![vec![1.0]],
        moment_matrix: vec![vec![1.0]],
        integration_moments: vec![1.0],
    }
}
