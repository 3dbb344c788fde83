//! Shared independent oracles for the integration suites.
//!
//! Nothing here calls into the code paths under test: quadrature rules are
//! derived from the Golub-Welsch recurrence, and grid integration is plain
//! midpoint summation.

#![allow(dead_code)]

use curse_lab::linalg::{sym_eigen, SymMatrix};

/// Gauss-Hermite rule adapted to the standard normal measure: returns
/// `(nodes, weights)` with `∫ f dμ ≈ Σ w_i f(x_i)` and `Σ w_i = 1`.
///
/// Built from the physicists' Hermite Jacobi matrix (zero diagonal,
/// off-diagonal `√(k/2)`); nodes are rescaled by `√2` and weights
/// normalized by `√π`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let jacobi = SymMatrix::from_fn(n, |i, j| {
        if j == i + 1 {
            ((j as f64) / 2.0).sqrt()
        } else {
            0.0
        }
    })
    .unwrap();
    let eig = sym_eigen(&jacobi).unwrap();
    let nodes: Vec<f64> = eig.eigenvalues.iter().map(|t| t * 2.0_f64.sqrt()).collect();
    let weights: Vec<f64> = eig
        .eigenvectors
        .iter()
        .map(|v| v[0] * v[0]) // √π v₀² / √π
        .collect();
    (nodes, weights)
}

/// Midpoint rule on `[a, b]` with `m` cells.
pub fn midpoint_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    (0..m).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Inclusive uniform grid with `m + 1` points.
pub fn grid(a: f64, b: f64, m: usize) -> impl Iterator<Item = f64> {
    (0..=m).map(move |i| a + (b - a) * i as f64 / m as f64)
}
