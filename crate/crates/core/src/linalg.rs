//! Small complex vector and matrix helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Result, SymdomError};

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cvec(entries: &[Complex64]) -> CVec {
    CVec::from_column_slice(entries)
}

/// Real vector promoted to a complex one.
pub fn rvec(entries: &[f64]) -> CVec {
    CVec::from_iterator(entries.len(), entries.iter().map(|&x| c(x, 0.0)))
}

/// `(z|w) = Σ z_i conj(w_i)`.
pub fn pairing(z: &CVec, w: &CVec) -> Complex64 {
    z.iter().zip(w.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(z: &CVec) -> f64 {
    z.iter().map(|a| a.norm_sqr()).sum()
}

pub fn check_dim(z: &CVec, d: usize) -> Result<()> {
    if z.len() != d {
        return Err(SymdomError::DimensionMismatch { expected: d, got: z.len() });
    }
    Ok(())
}

/// Rank-one matrix `a b^H`, so that `(a b^H) v = (v|b) a`.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// Largest entrywise deviation relative to `max(1, |a|_max)`.
pub fn rel_matrix_error(a: &CMat, b: &CMat) -> f64 {
    let scale = max_abs(a).max(1.0);
    max_abs(&(a - b)) / scale
}

/// Compares `a` with `c·b` where `c` is the unimodular phase making the
/// largest-modulus entries of `b` agree.
pub fn projective_matrix_error(a: &CMat, b: &CMat) -> f64 {
    let mut best = 0usize;
    let mut best_abs = -1.0;
    for (i, x) in b.iter().enumerate() {
        if x.norm() > best_abs {
            best_abs = x.norm();
            best = i;
        }
    }
    let ratio = a.as_slice()[best] / b.as_slice()[best];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { ONE };
    rel_matrix_error(a, &(b * phase))
}

/// Optimal unimodular phase for `lhs ≈ c·rhs` in least squares.
pub fn best_phase(lhs: &[Complex64], rhs: &[Complex64]) -> Complex64 {
    let s: Complex64 = lhs.iter().zip(rhs).map(|(a, b)| a * b.conj()).sum();
    if s.norm() > 0.0 {
        s / s.norm()
    } else {
        ONE
    }
}

/// Mixed relative error `|a - b| / max(1, |a|)`.
pub fn mixed_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

/// Principal complex power `z^s` for real `s`.
pub fn cpow(z: Complex64, s: f64) -> Complex64 {
    if s == 0.0 {
        return ONE;
    }
    if z == ZERO {
        return ZERO;
    }
    (z.ln() * s).exp()
}

pub fn ipow(z: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        ONE / z.powu((-k) as u32)
    }
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone().try_inverse().ok_or(SymdomError::SingularMatrix)
}
