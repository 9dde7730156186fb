//! Reproducing kernels, intertwining operators and positivity tests for
//! vector-valued weighted Bergman spaces on the unit ball of `C^d`.
//!
//! Conventions used throughout:
//! - the pairing `(z|w) = Σ z_i conj(w_i)` is linear in the first slot;
//! - Hilbert-space and Fock inner products are conjugate-linear in the first slot;
//! - the genus of the ball is `p = d + 1`.

pub mod ball;
pub mod cauchy;
pub mod cli;
pub mod error;
pub mod fibre;
pub mod intertwine;
pub mod interchange;
pub mod kernels;
pub mod linalg;
pub mod poly;
pub mod positivity;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod special;

pub use error::{Result, SymdomError};
pub use num_complex::Complex64;
