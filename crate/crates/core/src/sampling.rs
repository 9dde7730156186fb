//! Seeded random sampling of points, unitaries and polynomials.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{norm_sq, CMat, CVec};
use crate::poly::{CPolynomial, MultiIndex};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector(rng: &mut SeededRng, d: usize) -> CVec {
    CVec::from_fn(d, |_, _| gaussian_complex(rng))
}

/// Uniform point in the ball of radius `rho` in `C^d`.
pub fn ball_point(rng: &mut SeededRng, d: usize, rho: f64) -> CVec {
    let g = gaussian_vector(rng, d);
    let u: f64 = rng.random();
    let r = rho * u.powf(1.0 / (2 * d) as f64);
    &g * Complex64::new(r / norm_sq(&g).sqrt(), 0.0)
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn unitary(rng: &mut SeededRng, d: usize) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q.clone();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    out
}

/// Polynomial with Gaussian coefficients on every monomial of the given degrees.
pub fn polynomial(rng: &mut SeededRng, d: usize, degrees: std::ops::RangeInclusive<usize>) -> CPolynomial {
    let mut p = CPolynomial::zero(d);
    for k in degrees {
        for idx in MultiIndex::of_degree(d, k) {
            p.add_term(idx, gaussian_complex(rng));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_interior() {
        let mut a = rng(11);
        let mut b = rng(11);
        for _ in 0..50 {
            let p = ball_point(&mut a, 3, 0.8);
            assert_eq!(p, ball_point(&mut b, 3, 0.8));
            assert!(norm_sq(&p) < 0.64 + 1e-12);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(3);
        let u = unitary(&mut r, 3);
        let defect = (u.adjoint() * &u - CMat::identity(3, 3)).norm();
        assert!(defect < 1e-13);
    }
}
