//! Pochhammer symbols, factorials and binomial coefficients.

use crate::{Result, SymdomError};

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// `(a)_k` for use as a divisor; errors if it vanishes.
pub fn pochhammer_nonzero(a: f64, k: usize) -> Result<f64> {
    let v = pochhammer(a, k);
    if v == 0.0 || !v.is_finite() {
        return Err(SymdomError::PochhammerPole { a, k });
    }
    Ok(v)
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Generalized binomial `C(a, k) = a (a-1) ... (a-k+1) / k!` for real `a`.
pub fn gen_binomial(a: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (a - j as f64) / (j as f64 + 1.0);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        gen_binomial(n as f64, k)
    }
}

/// Number of monomials of degree `k` in `d` variables.
pub fn count_monomials(d: usize, k: usize) -> usize {
    if d == 0 {
        return usize::from(k == 0);
    }
    let mut acc: usize = 1;
    for j in 0..k {
        acc = acc * (d + j) / (j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert!(pochhammer_nonzero(-1.0, 2).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(2, 5), 0.0);
        assert!((gen_binomial(-0.5, 2) - 0.375).abs() < 1e-15);
        assert_eq!(count_monomials(2, 3), 4);
        assert_eq!(count_monomials(3, 2), 6);
    }
}
