//! Numerical differentiation of holomorphic functions by Cauchy integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{norm_sq, CVec, ZERO};
use crate::poly::CPolynomial;
use crate::special::factorial;
use crate::{Result, SymdomError};

/// Circle radius (in the ambient space) and number of trapezoid nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyConfig {
    pub radius: f64,
    pub nodes: usize,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        CauchyConfig { radius: 0.1, nodes: 64 }
    }
}

/// A holomorphic function on an open subset of `C^d`.
pub trait Holomorphic: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &CVec) -> Complex64;

    /// Distance from `z` to the boundary of the domain of holomorphy;
    /// `None` for entire functions.
    fn margin(&self, _z: &CVec) -> Option<f64> {
        None
    }

    fn as_polynomial(&self) -> Option<&CPolynomial> {
        None
    }
}

/// Where a closure-backed function is known to be holomorphic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Entire,
    /// Open ball of the given radius about the origin.
    Ball(f64),
}

impl Domain {
    pub fn margin(&self, z: &CVec) -> Option<f64> {
        match self {
            Domain::Entire => None,
            Domain::Ball(r) => Some(r - norm_sq(z).sqrt()),
        }
    }
}

pub struct HoloFn<F> {
    pub dim: usize,
    pub domain: Domain,
    pub f: F,
}

impl<F> HoloFn<F>
where
    F: Fn(&CVec) -> Complex64 + Sync,
{
    pub fn new(dim: usize, domain: Domain, f: F) -> Self {
        HoloFn { dim, domain, f }
    }
}

impl<F> Holomorphic for HoloFn<F>
where
    F: Fn(&CVec) -> Complex64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &CVec) -> Complex64 {
        (self.f)(z)
    }

    fn margin(&self, z: &CVec) -> Option<f64> {
        self.domain.margin(z)
    }
}

/// Taylor coefficients `g^{(k)}(0)/k!`, `k = 0..=kmax`, of a function of one
/// complex variable from its values on the circle `|t| = r`.
pub fn taylor_coefficients<G>(g: G, r: f64, nodes: usize, kmax: usize) -> Vec<Complex64>
where
    G: Fn(Complex64) -> Complex64,
{
    let values: Vec<Complex64> = (0..nodes)
        .map(|j| g(Complex64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64)))
        .collect();
    (0..=kmax)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / nodes as f64))
                .sum();
            s / (nodes as f64 * r.powi(k as i32))
        })
        .collect()
}

/// `d^k/dt^k f(z + tζ)` at `t = 0`, i.e. `((ζ|∂̄)^k f)(z)`.
pub fn directional_derivative(
    f: &dyn Holomorphic,
    z: &CVec,
    zeta: &CVec,
    k: usize,
    cfg: &CauchyConfig,
) -> Result<Complex64> {
    Ok(directional_taylor(f, z, zeta, k, cfg)?[k] * factorial(k))
}

/// Taylor coefficients of `t ↦ f(z + tζ)` up to order `kmax`.
pub fn directional_taylor(
    f: &dyn Holomorphic,
    z: &CVec,
    zeta: &CVec,
    kmax: usize,
    cfg: &CauchyConfig,
) -> Result<Vec<Complex64>> {
    let len = norm_sq(zeta).sqrt();
    if len == 0.0 || kmax == 0 {
        let mut out = vec![ZERO; kmax + 1];
        out[0] = f.eval(z);
        return Ok(out);
    }
    if let Some(margin) = f.margin(z) {
        if cfg.radius >= margin {
            return Err(SymdomError::AnalyticityRadius { radius: cfg.radius, margin });
        }
    }
    let r = cfg.radius / len;
    Ok(taylor_coefficients(|t| f.eval(&(z + zeta * t)), r, cfg.nodes, kmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec, pairing};

    #[test]
    fn exponential_directional_derivatives() {
        let b = cvec(&[c(0.3, -0.2), c(0.1, 0.5)]);
        let bb = b.clone();
        let f = HoloFn::new(2, Domain::Entire, move |z: &CVec| pairing(z, &bb).exp());
        let z = cvec(&[c(0.1, 0.2), c(-0.3, 0.1)]);
        let zeta = cvec(&[c(0.7, 0.1), c(0.2, -0.4)]);
        for k in 0..4 {
            let got = directional_derivative(&f, &z, &zeta, k, &CauchyConfig::default()).unwrap();
            let want = pairing(&zeta, &b).powu(k as u32) * pairing(&z, &b).exp();
            assert!((got - want).norm() < 1e-11, "k={k}");
        }
    }

    #[test]
    fn radius_beyond_domain_is_rejected() {
        let f = HoloFn::new(1, Domain::Ball(1.0), |z: &CVec| 1.0 / (1.0 - z[0]));
        let z = cvec(&[c(0.95, 0.0)]);
        let zeta = cvec(&[c(1.0, 0.0)]);
        assert!(directional_derivative(&f, &z, &zeta, 1, &CauchyConfig::default()).is_err());
    }
}
