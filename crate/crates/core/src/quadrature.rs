//! Gaussian quadrature rules and the Fock-space quadrature oracle.

use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussHermite, GaussJacobi};
use num_complex::Complex64;

use crate::linalg::{CVec, ZERO};
use crate::poly::CPolynomial;
use crate::{Result, SymdomError};

fn degree(n: usize) -> Result<NonZeroUsize> {
    NonZeroUsize::new(n).ok_or_else(|| SymdomError::Quadrature("need at least one node".into()))
}

/// Nodes and weights for `∫_{-1}^{1} (1-s)^α (1+s)^β g(s) ds`.
pub fn jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<Vec<(f64, f64)>> {
    let a = FiniteAboveNegOneF64::try_from(alpha).map_err(|e| SymdomError::Quadrature(format!("α = {alpha}: {e}")))?;
    let b = FiniteAboveNegOneF64::try_from(beta).map_err(|e| SymdomError::Quadrature(format!("β = {beta}: {e}")))?;
    Ok(GaussJacobi::new(degree(n)?, a, b).iter().map(|(x, w)| (*x, *w)).collect())
}

/// Nodes and weights for `∫_R e^{-x²} g(x) dx`.
pub fn hermite_rule(n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(GaussHermite::new(degree(n)?).iter().map(|(x, w)| (*x, *w)).collect())
}

/// `∫_{C^d} conj(p(z)) q(z) e^{-|z|²} dz / π^d` by a tensor Gauss–Hermite rule
/// with `nodes` points per real coordinate.
pub fn fock_inner_quadrature(p: &CPolynomial, q: &CPolynomial, nodes: usize) -> Result<Complex64> {
    if p.dim() != q.dim() {
        return Err(SymdomError::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let d = p.dim();
    let rule = hermite_rule(nodes)?;
    let total = nodes.pow(2 * d as u32);
    let mut acc = ZERO;
    for mut flat in 0..total {
        let mut z = CVec::zeros(d);
        let mut weight = 1.0;
        for zi in z.iter_mut() {
            let (x, wx) = rule[flat % nodes];
            flat /= nodes;
            let (y, wy) = rule[flat % nodes];
            flat /= nodes;
            *zi = Complex64::new(x, y);
            weight *= wx * wy;
        }
        acc += p.eval(&z).conj() * q.eval(&z) * weight;
    }
    Ok(acc / std::f64::consts::PI.powi(d as i32))
}
