//! Exact worst-case quadrature errors in tensor-product reproducing-kernel
//! Hilbert spaces, lower-bound certification through positive
//! semi-definiteness and Schur-product inequalities, and seeded random-point
//! experiments.
//!
//! The crate is organized around the chain
//!
//! * [`factors`] — univariate coordinate spaces (kernel, representer, α, κ),
//! * [`tensor`] — product problems and the exact error `e(X_n)² = ‖h‖² − bᵀG⁺b`,
//! * [`bounds`] — closed-form lower bounds and PSD certificates,
//! * [`schur`] — the Schur-product inequalities behind those bounds,
//! * [`experiments`] — random-information experiments and node optimization,
//!
//! all resting on the dense symmetric-matrix kernel in [`linalg`].
//!
//! Every randomized component is seeded and bit-reproducible at any thread
//! count. All problems are set up so the initial error `e(0, S_d) = ‖h_d‖`
//! is known exactly; built-in factors are normalized to 1 except where a
//! family deliberately exposes its raw normalization.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod factors;
pub mod linalg;
pub mod schur;
pub mod tensor;

pub use error::{Error, Result};
