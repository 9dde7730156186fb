//! Operator matrices on the fibre `P^n Z` of polynomials of degree `≤ n`,
//! in the Fock-orthonormal monomial basis `ζ^I / sqrt(I!)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::ball::{bergman_inv_sqrt, bergman_sqrt, genus, Automorphism};
use crate::linalg::{cpow, inverse, projective_matrix_error, CMat, CVec, ONE};
use crate::poly::{CPolynomial, MultiIndex};
use crate::special::{count_monomials, factorial};
use crate::{Result, SymdomError};

/// Monomials of degree `≤ n` in `d` variables, graded-lex ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedBasis {
    d: usize,
    n: usize,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
    sqrt_fact: Vec<f64>,
}

impl GradedBasis {
    pub fn new(d: usize, n: usize) -> Self {
        let indices = MultiIndex::up_to_degree(d, n);
        let position = indices.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let sqrt_fact = indices.iter().map(|m| m.factorial().sqrt()).collect();
        GradedBasis { d, n, indices, position, sqrt_fact }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn degree_of(&self, pos: usize) -> usize {
        self.indices[pos].degree()
    }

    /// Positions of the degree-`k` block.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = (0..k).map(|j| count_monomials(self.d, j)).sum();
        start..start + count_monomials(self.d, k)
    }

    /// The basis polynomial `ζ^I / sqrt(I!)`.
    pub fn element(&self, pos: usize) -> CPolynomial {
        CPolynomial::monomial(self.indices[pos].clone(), Complex64::new(1.0 / self.sqrt_fact[pos], 0.0))
    }

    /// Coordinates of `p` in the orthonormal basis; errors if `p` has terms
    /// of degree above `n`.
    pub fn coordinates(&self, p: &CPolynomial) -> Result<CVec> {
        let mut v = CVec::zeros(self.len());
        for (idx, c) in p.terms() {
            let pos = *self
                .position
                .get(idx)
                .ok_or_else(|| SymdomError::InvalidParameter(format!("monomial {:?} outside P^{}", idx.0, self.n)))?;
            v[pos] = c * self.sqrt_fact[pos];
        }
        Ok(v)
    }

    pub fn polynomial(&self, v: &CVec) -> CPolynomial {
        let mut p = CPolynomial::zero(self.d);
        for (pos, idx) in self.indices.iter().enumerate() {
            p.add_term(idx.clone(), v[pos] / self.sqrt_fact[pos]);
        }
        p
    }
}

/// A linear operator on `P^n Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreOperator {
    pub basis: Arc<GradedBasis>,
    pub matrix: CMat,
}

impl FibreOperator {
    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        let m = basis.len();
        FibreOperator { basis, matrix: CMat::identity(m, m) }
    }

    /// Matrix of a linear map given on polynomials.
    pub fn from_map<F>(basis: Arc<GradedBasis>, f: F) -> Result<Self>
    where
        F: Fn(&CPolynomial) -> Result<CPolynomial>,
    {
        let m = basis.len();
        let mut matrix = CMat::zeros(m, m);
        for j in 0..m {
            let col = basis.coordinates(&f(&basis.element(j))?)?;
            matrix.set_column(j, &col);
        }
        Ok(FibreOperator { basis, matrix })
    }

    /// Orthogonal projection onto the degree-`k` block.
    pub fn degree_projection(basis: Arc<GradedBasis>, k: usize) -> Self {
        let m = basis.len();
        let mut matrix = CMat::zeros(m, m);
        for i in basis.block(k) {
            matrix[(i, i)] = ONE;
        }
        FibreOperator { basis, matrix }
    }

    /// Block-scalar operator `Σ_k values[k] P_k`.
    pub fn block_scalar(basis: Arc<GradedBasis>, values: &[Complex64]) -> Self {
        let m = basis.len();
        let diag = CVec::from_fn(m, |i, _| values[basis.degree_of(i)]);
        FibreOperator { basis, matrix: CMat::from_diagonal(&diag) }
    }

    pub fn apply(&self, p: &CPolynomial) -> Result<CPolynomial> {
        Ok(self.basis.polynomial(&(&self.matrix * self.basis.coordinates(p)?)))
    }

    pub fn compose(&self, other: &FibreOperator) -> FibreOperator {
        FibreOperator { basis: self.basis.clone(), matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> Result<FibreOperator> {
        Ok(FibreOperator { basis: self.basis.clone(), matrix: inverse(&self.matrix)? })
    }

    /// Largest entry outside the blocks `λ → λ + 1`.
    pub fn non_shift_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                if self.basis.degree_of(i) != self.basis.degree_of(j) + 1 {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Basis {
            d: usize,
            n: usize,
        }
        let m = self.basis.len();
        let entries: Vec<_> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| crate::interchange::ComplexJson::from(self.matrix[(i, j)]))
            .collect();
        serde_json::json!({
            "basis": Basis { d: self.basis.d(), n: self.basis.n() },
            "matrix": entries,
        })
    }
}

/// Degree weights of a `K`-invariant inner product on `P^n Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreMetric {
    weights: Vec<f64>,
}

impl FibreMetric {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(SymdomError::InvalidParameter("fibre metric weights must be positive".into()));
        }
        Ok(FibreMetric { weights })
    }

    /// The Fock metric, all weights 1.
    pub fn fock(n: usize) -> Self {
        FibreMetric { weights: vec![1.0; n + 1] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `β_λ = n! / (n - λ)!`.
pub fn u_invariant_weights(n: usize, _d: usize) -> FibreMetric {
    FibreMetric {
        weights: (0..=n).map(|l| (0..l).map(|j| (n - j) as f64).product()).collect(),
    }
}

/// `G^{-1} A^† G` with `G = diag(β_deg)`.
pub fn metric_adjoint(a: &FibreOperator, beta: &FibreMetric) -> Result<FibreOperator> {
    let basis = &a.basis;
    if beta.weights.len() != basis.n() + 1 {
        return Err(SymdomError::DimensionMismatch { expected: basis.n() + 1, got: beta.weights.len() });
    }
    let g = |i: usize| beta.weights[basis.degree_of(i)];
    let adj = a.matrix.adjoint();
    let m = basis.len();
    let matrix = CMat::from_fn(m, m, |i, j| adj[(i, j)] * (g(j) / g(i)));
    Ok(FibreOperator { basis: basis.clone(), matrix })
}

fn basis_for(d: usize, n: usize) -> Arc<GradedBasis> {
    Arc::new(GradedBasis::new(d, n))
}

/// Matrix of `h^{π_n}`: `φ ↦ det(h)^{n/p} φ(h^{-1} ·)`.
pub fn pi_n_linear(h: &CMat, n: usize) -> Result<FibreOperator> {
    let d = h.nrows();
    let hinv = inverse(h)?;
    let p = genus(d) as f64;
    let scale = cpow(h.determinant(), n as f64 / p);
    FibreOperator::from_map(basis_for(d, n), |phi| Ok(phi.compose_linear(&hinv).scale(&scale)))
}

/// `τ̄_w`: `φ ↦ (1 - (ζ|w))^{n - λ} φ` on homogeneous `φ` of degree `λ`.
pub fn tau_bar_pi_n(w: &CVec, n: usize) -> Result<FibreOperator> {
    let d = w.len();
    let one = CPolynomial::constant(d, ONE);
    let factor = &one - &CPolynomial::pairing_form(w);
    FibreOperator::from_map(basis_for(d, n), |phi| {
        let lam = phi.degree().unwrap_or(0);
        Ok(&factor.pow((n - lam) as u32) * phi)
    })
}

/// `S(w)`: `φ ↦ (n - λ) (ζ|w) φ` on homogeneous `φ` of degree `λ`.
pub fn shift_generator(w: &CVec, n: usize) -> Result<FibreOperator> {
    let d = w.len();
    let form = CPolynomial::pairing_form(w);
    FibreOperator::from_map(basis_for(d, n), |phi| {
        let lam = phi.degree().unwrap_or(0);
        Ok((&form * phi).scale(&Complex64::new((n - lam) as f64, 0.0)))
    })
}

/// `(Q_ζ w)^{dπ_n}`: `φ ↦ (∂_ζ φ)(Q_ζ w) - n (ζ|w) φ`, from the definition.
pub fn jordan_generator(w: &CVec, n: usize) -> Result<FibreOperator> {
    let d = w.len();
    let form = CPolynomial::pairing_form(w);
    FibreOperator::from_map(basis_for(d, n), |phi| {
        let mut out = CPolynomial::zero(d);
        for i in 0..d {
            let qi = &form * &CPolynomial::variable(d, i);
            out = &out + &(&phi.partial(i) * &qi);
        }
        let mult = (&form * phi).scale(&Complex64::new(n as f64, 0.0));
        Ok(truncate(&(&out - &mult), n))
    })
}

fn truncate(p: &CPolynomial, n: usize) -> CPolynomial {
    let mut out = CPolynomial::zero(p.dim());
    for k in 0..=n {
        out = &out + &p.homogeneous_component(k);
    }
    out
}

/// `exp(S) = Σ_{k ≤ n} S^k / k!` for a strictly degree-raising `S`.
pub fn exp_nilpotent(s: &FibreOperator) -> FibreOperator {
    let m = s.basis.len();
    let mut acc = CMat::identity(m, m);
    let mut power = CMat::identity(m, m);
    for k in 1..=s.basis.n() {
        power = &power * &s.matrix;
        acc += &power / Complex64::new(factorial(k), 0.0);
    }
    FibreOperator { basis: s.basis.clone(), matrix: acc }
}

/// Matrix of `[g]_z^{π_n} = (∂_z g)^{π_n} τ̄_u`.
pub fn cocycle_pi_n(g: &Automorphism, z: &CVec, n: usize) -> Result<FibreOperator> {
    let (dg, u) = crate::ball::cocycle_translation_part(g, z)?;
    Ok(pi_n_linear(&dg, n)?.compose(&tau_bar_pi_n(&u, n)?))
}

/// Matrix of `[g]_z^{-π_n}` assembled from its pointwise definition
/// `φ ↦ det(∂_{z+ζ} g)^{-n/p} φ(g(z+ζ) - g(z))` by interpolation.
pub fn cocycle_pi_n_inverse_pointwise(g: &Automorphism, z: &CVec, n: usize) -> Result<FibreOperator> {
    let d = z.len();
    let p = genus(d) as f64;
    let gz = g.apply(z)?;
    FibreOperator::from_map(basis_for(d, n), |phi| {
        let err = std::cell::RefCell::new(None);
        let out = CPolynomial::interpolate(d, n, |zeta| {
            let shifted = z + zeta;
            let r = (|| -> Result<Complex64> {
                let det = g.jacobian_det_pow(&shifted, -(n as f64) / p)?;
                Ok(det * phi.eval(&(g.apply(&shifted)? - &gz)))
            })();
            r.unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            })
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    })
}

/// Outcome of comparing two fibre-operator expressions.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MatrixComparison {
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks `[g]_z = (∂_z g)^{π} (B^{1/2}_{z,y})^{π} exp(S(y)) (B^{-1/2}_{z,y})^{π}`
/// with `y = g^{-1}(0)`, up to a unimodular scalar.
pub fn factorization_check(g: &Automorphism, z: &CVec, n: usize, tol: f64) -> Result<MatrixComparison> {
    let y = g.preimage_of_zero();
    let lhs = cocycle_pi_n(g, z, n)?;
    let rhs = pi_n_linear(&g.derivative(z)?, n)?
        .compose(&pi_n_linear(&bergman_sqrt(z, &y)?, n)?)
        .compose(&exp_nilpotent(&shift_generator(&y, n)?))
        .compose(&pi_n_linear(&bergman_inv_sqrt(z, &y)?, n)?);
    let max_error = projective_matrix_error(&lhs.matrix, &rhs.matrix);
    Ok(MatrixComparison { max_error, tol, pass: max_error <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec, max_abs};

    #[test]
    fn basis_layout() {
        let b = GradedBasis::new(2, 3);
        assert_eq!(b.len(), 10);
        assert_eq!(b.block(2), 3..6);
        assert_eq!(GradedBasis::new(3, 2).len(), 10);
    }

    #[test]
    fn scalar_spin_action() {
        let s = c(0.7, 0.2);
        let h = CMat::from_element(1, 1, s);
        let op = pi_n_linear(&h, 2).unwrap();
        for k in 0..=2 {
            let want = cpow(s, 1.0) * s.powi(-(k as i32));
            assert!((op.matrix[(k, k)] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn tau_bar_examples() {
        let w = cvec(&[c(0.3, 0.4)]);
        let t = tau_bar_pi_n(&w, 1).unwrap();
        assert_eq!(t.matrix[(0, 0)], ONE);
        assert!((t.matrix[(1, 0)] + w[0].conj()).norm() < 1e-15);
        assert_eq!(tau_bar_pi_n(&CVec::zeros(2), 3).unwrap().matrix, CMat::identity(10, 10));
    }

    #[test]
    fn shift_examples() {
        let s = shift_generator(&cvec(&[ONE]), 2).unwrap();
        let basis = s.basis.clone();
        let one = CPolynomial::constant(1, ONE);
        let z = CPolynomial::variable(1, 0);
        assert_eq!(s.apply(&one).unwrap().max_coeff_diff(&z.scale(&c(2.0, 0.0))), 0.0);
        assert!(s.apply(&z).unwrap().max_coeff_diff(&z.pow(2)) < 1e-15);
        assert!(s.apply(&z.pow(2)).unwrap().is_zero());
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn weights() {
        assert_eq!(u_invariant_weights(2, 2).weights(), &[1.0, 2.0, 2.0]);
        assert_eq!(u_invariant_weights(0, 1).weights(), &[1.0]);
    }

    #[test]
    fn adjoint_with_unit_weights_is_conjugate_transpose() {
        let s = shift_generator(&cvec(&[c(0.2, 0.1), c(-0.3, 0.5)]), 2).unwrap();
        let adj = metric_adjoint(&s, &FibreMetric::fock(2)).unwrap();
        assert_eq!(adj.matrix, s.matrix.adjoint());
        let beta = u_invariant_weights(2, 2);
        let back = metric_adjoint(&metric_adjoint(&s, &beta).unwrap(), &beta).unwrap();
        assert!(max_abs(&(back.matrix - &s.matrix)) < 1e-15);
    }
}
