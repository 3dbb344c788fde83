//! The error-vs-definiteness equivalence, tested in both directions on
//! randomized problems: the matrix `(K(x_j,x_k) − α·h(x_j)h(x_k))` is PSD
//! exactly when `e(X_n)² ≥ ‖h‖² − 1/α`.

mod common;

use curse_lab::bounds::psd_certificate;
use curse_lab::experiments::sample_uniform_points;
use curse_lab::factors::UnivariateFactor;
use curse_lab::tensor::{worst_case_error_sq, PointSet, TensorProblem};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_bounded_factor(rng: &mut ChaCha8Rng) -> UnivariateFactor {
    match rng.random_range(0..8) {
        0 => UnivariateFactor::trig1(),
        1 => UnivariateFactor::weighted_trig(0.05 + 0.95 * rng.random::<f64>()).unwrap(),
        2 => UnivariateFactor::phase_trig(rng.random::<f64>() * std::f64::consts::TAU).unwrap(),
        3 => UnivariateFactor::interval_poly2(),
        4 => UnivariateFactor::zero_boundary(),
        5 => UnivariateFactor::centered_discrepancy(rng.random()),
        6 => UnivariateFactor::korobov_smooth(rng.random_range(1..=3)).unwrap(),
        _ => UnivariateFactor::affine_linear(),
    }
}

fn random_problem(rng: &mut ChaCha8Rng, max_d: usize) -> TensorProblem {
    let d = rng.random_range(1..=max_d);
    TensorProblem::new((0..d).map(|_| random_bounded_factor(rng)).collect()).unwrap()
}

fn random_points(problem: &TensorProblem, n: usize, rng: &mut ChaCha8Rng) -> PointSet {
    sample_uniform_points(&problem.domains(), n, rng.random()).unwrap()
}

#[test]
fn equivalence_both_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for _ in 0..1000 {
        let problem = random_problem(&mut rng, 3);
        let d = problem.dimension();
        let n = rng.random_range(1..=8);
        let points = random_points(&problem, n, &mut rng);

        let alpha_cap = 4.0 * 2.0_f64.powi(d as i32) / n as f64;
        let alpha = (rng.random::<f64>() * alpha_cap).max(1e-6);

        let wce = worst_case_error_sq(&problem, &points).unwrap();
        let h_norm_sq = problem.initial_error_sq();
        let implied = h_norm_sq - 1.0 / alpha;
        if (wce.e_sq - implied).abs() <= 1e-7 {
            skipped += 1;
            continue;
        }
        let cert = psd_certificate(&problem, &points, alpha).unwrap();
        assert_eq!(
            cert.certificate.is_psd(),
            wce.e_sq >= implied,
            "alpha {alpha}, e² {}, implied bound {implied}, min eig {}",
            wce.e_sq,
            cert.certificate.min_eigenvalue,
        );
        checked += 1;
    }
    assert!(checked >= 500, "only {checked} instances off the boundary ({skipped} skipped)");
}

#[test]
fn certified_bound_never_exceeds_error() {
    // Whenever the certificate is PSD, the implied bound must actually be a
    // lower bound on the computed squared error.
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..300 {
        let problem = random_problem(&mut rng, 3);
        let n = rng.random_range(1..=6);
        let points = random_points(&problem, n, &mut rng);
        let alpha = (rng.random::<f64>() * 20.0).max(1e-3);
        let cert = psd_certificate(&problem, &points, alpha).unwrap();
        if cert.certificate.is_psd() {
            let wce = worst_case_error_sq(&problem, &points).unwrap();
            assert!(
                wce.e_sq >= cert.bound_value - 1e-7,
                "certified {} but e² = {}",
                cert.bound_value,
                wce.e_sq
            );
        }
    }
}
