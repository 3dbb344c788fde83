//! Soundness of every closed-form bound against the exact computed error:
//! no point set may beat the applicable lower bound.

mod common;

use curse_lab::bounds::{
    curse_bound_homogeneous, curse_bound_weighted, rotated_problem_bound,
};
use curse_lab::experiments::sample_uniform_points;
use curse_lab::factors::UnivariateFactor;
use curse_lab::tensor::{worst_case_error_sq, TensorProblem};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn check_bound_on_random_sets(
    problem: &TensorProblem,
    bound_of_n: impl Fn(u64) -> f64,
    sets: usize,
    max_n: usize,
    seed: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sets {
        let n = rng.random_range(1..=max_n);
        let points = sample_uniform_points(&problem.domains(), n, rng.random()).unwrap();
        let e = worst_case_error_sq(problem, &points).unwrap();
        let bound = bound_of_n(n as u64);
        assert!(
            e.e_sq >= bound - 1e-9,
            "e² = {} undercuts bound {bound} at n = {n}",
            e.e_sq
        );
    }
}

#[test]
fn homogeneous_bound_sound_for_curse_factors() {
    let cases: Vec<(&str, UnivariateFactor, usize)> = vec![
        ("trig1", UnivariateFactor::trig1(), 4),
        ("interval_poly2", UnivariateFactor::interval_poly2(), 3),
        ("zero_boundary", UnivariateFactor::zero_boundary(), 3),
        (
            "centered_discrepancy",
            UnivariateFactor::centered_discrepancy(true),
            3,
        ),
    ];
    for (name, factor, d) in cases {
        let problem = TensorProblem::homogeneous(factor, d).unwrap();
        check_bound_on_random_sets(
            &problem,
            |n| curse_bound_homogeneous(d, n).bound_value,
            40,
            1 << d,
            0xabc ^ d as u64,
        );
        let _ = name;
    }
}

#[test]
fn weighted_bound_sound_for_alpha_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbca);
    for _ in 0..10 {
        let d = rng.random_range(1..=4);
        let factors: Vec<UnivariateFactor> = (0..d)
            .map(|_| {
                UnivariateFactor::weighted_trig(0.1 + 0.9 * rng.random::<f64>()).unwrap()
            })
            .collect();
        let alphas: Vec<f64> = factors.iter().map(|f| f.alpha().unwrap()).collect();
        let problem = TensorProblem::new(factors).unwrap();
        check_bound_on_random_sets(
            &problem,
            |n| curse_bound_weighted(&alphas, n).unwrap().bound_value,
            20,
            8,
            rng.random(),
        );
    }
}

#[test]
fn rotated_bound_sound_for_phase_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcab);
    for _ in 0..10 {
        let d = rng.random_range(2..=4);
        let factors: Vec<UnivariateFactor> = (0..d)
            .map(|_| {
                if rng.random::<bool>() {
                    UnivariateFactor::trig1()
                } else {
                    UnivariateFactor::phase_trig(rng.random::<f64>() * std::f64::consts::TAU)
                        .unwrap()
                }
            })
            .collect();
        let problem = TensorProblem::new(factors).unwrap();
        check_bound_on_random_sets(
            &problem,
            |n| rotated_problem_bound(&problem, n).unwrap().bound_value,
            20,
            1 << (d - 1),
            rng.random(),
        );
    }
}

#[test]
fn trig_certificate_holds_at_theorem_alpha() {
    // The proof route of the homogeneous bound: for the trig product and
    // α = 2^d / n, the shifted kernel matrix is PSD at any nodes.
    use curse_lab::bounds::psd_certificate;
    let mut rng = ChaCha8Rng::seed_from_u64(0xdef);
    for _ in 0..100 {
        let d = rng.random_range(1..=6);
        let n = rng.random_range(1..=16);
        let problem = TensorProblem::homogeneous(UnivariateFactor::trig1(), d).unwrap();
        let points = sample_uniform_points(&problem.domains(), n, rng.random()).unwrap();
        let alpha = 2.0_f64.powi(d as i32) / n as f64;
        let cert = psd_certificate(&problem, &points, alpha).unwrap();
        assert!(
            cert.certificate.is_psd(),
            "d={d}, n={n}: min eigenvalue {}",
            cert.certificate.min_eigenvalue
        );
        assert!((cert.bound_value - (1.0 - n as f64 * 2.0_f64.powi(-(d as i32)))).abs() < 1e-12);
    }
}

#[test]
fn specialization_chain() {
    // Weighted at α ≡ 1 reproduces the homogeneous formula; the unified
    // bound at ‖g‖² = 2^d reproduces the rotated one.
    use curse_lab::bounds::unified_bound;
    for d in 1..=10 {
        for n in [0u64, 1, 5, 1 << d.min(6)] {
            let homo = curse_bound_homogeneous(d, n).bound_value;
            let weighted = curse_bound_weighted(&vec![1.0; d], n).unwrap().bound_value;
            assert!((homo - weighted).abs() < 1e-15);

            let unified = unified_bound(2.0_f64.powi(d as i32), n).unwrap().bound_value;
            let rotated_value = 1.0 - n as f64 * 2.0_f64.powi(-(d as i32) + 1);
            assert!((unified - rotated_value).abs() < 1e-12);
        }
    }
}
