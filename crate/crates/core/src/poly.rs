//! Sparse multivariate holomorphic polynomials, the Fischer–Fock inner
//! product and the elementary kernels `E^k`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cauchy::{self, CauchyConfig, Holomorphic};
use crate::linalg::{pairing, CMat, CVec, ONE, ZERO};
use crate::special::factorial;
use crate::{Result, SymdomError};

/// Exponent vector of a monomial `z^I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `I! = Π i_j!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| factorial(e as usize)).product()
    }

    pub fn factorial_int(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for j in 2..=e {
                acc *= BigInt::from(j);
            }
        }
        acc
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if componentwise non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    /// `Π C(i_j, k_j)`.
    pub fn binomial(&self, sub: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(&sub.0)
            .map(|(&a, &b)| crate::special::binomial(a as usize, b as usize))
            .product()
    }

    pub fn eval_monomial(&self, z: &CVec) -> Complex64 {
        self.0
            .iter()
            .zip(z.iter())
            .fold(ONE, |acc, (&e, zi)| acc * zi.powu(e))
    }

    /// All multi-indices of total degree `k` in `d` variables, graded-lex order.
    pub fn of_degree(d: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; d];
        fn rec(pos: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let d = cur.len();
            if pos + 1 == d {
                cur[pos] = left as u32;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e as u32;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if d == 0 {
            if k == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(0, k, &mut cur, &mut out);
        out
    }

    /// All multi-indices with `|I| ≤ n`, graded-lex order.
    pub fn up_to_degree(d: usize, n: usize) -> Vec<MultiIndex> {
        (0..=n).flat_map(|k| Self::of_degree(d, k)).collect()
    }
}

impl Ord for MultiIndex {
    /// Graded lexicographic: lower total degree first, then larger leading
    /// exponents first (so `z1` precedes `z2`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient field of a polynomial.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn from_int(n: &BigInt) -> Self;
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_int(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
}

/// Complex number with exact rational real and imaginary parts.
pub type ExactComplex = Complex<BigRational>;

impl Scalar for ExactComplex {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn from_int(n: &BigInt) -> Self {
        Complex::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }
}

pub fn exact(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> ExactComplex {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

/// Sparse polynomial `Σ c_I z^I` in `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    dim: usize,
    terms: BTreeMap<MultiIndex, S>,
}

pub type CPolynomial = Poly<Complex64>;
pub type ExactPolynomial = Poly<ExactComplex>;

impl<S: Scalar> Poly<S> {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(index: MultiIndex, c: S) -> Self {
        let mut p = Poly::zero(index.dim());
        p.add_term(index, c);
        p
    }

    /// The coordinate function `z_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, i), S::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut p = Poly::zero(dim);
        for (i, c) in terms {
            if i.dim() != dim {
                return Err(SymdomError::DimensionMismatch { expected: dim, got: i.dim() });
            }
            p.add_term(i, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &MultiIndex) -> S {
        self.terms.get(index).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|i| i.degree() == k)
    }

    pub fn add_term(&mut self, index: MultiIndex, c: S) {
        debug_assert_eq!(index.dim(), self.dim);
        let updated = self.terms.get(&index).cloned().unwrap_or_else(S::zero) + c;
        if updated.is_zero() {
            self.terms.remove(&index);
        } else {
            self.terms.insert(index, updated);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Poly::zero(self.dim);
        for (i, v) in &self.terms {
            let w = v.clone() * c.clone();
            if !w.is_zero() {
                out.terms.insert(i.clone(), w);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::constant(self.dim, S::one()), |acc, _| &acc * self)
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_component(&self, k: usize) -> Self {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.degree() == k)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// `∂ / ∂z_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.dim);
        for (idx, c) in &self.terms {
            let e = idx.0[i];
            if e == 0 {
                continue;
            }
            let mut j = idx.clone();
            j.0[i] -= 1;
            out.add_term(j, c.clone() * S::from_int(&BigInt::from(e)));
        }
        out
    }

    /// Fischer–Fock inner product `Σ conj(p_I) q_I I!`.
    pub fn fock_inner(&self, other: &Self) -> Result<S> {
        fock_inner(self, other)
    }
}

impl CPolynomial {
    pub fn eval(&self, z: &CVec) -> Complex64 {
        let maxdeg = self.degree().unwrap_or(0);
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .map(|&zi| {
                let mut row = Vec::with_capacity(maxdeg + 1);
                let mut acc = ONE;
                for _ in 0..=maxdeg {
                    row.push(acc);
                    acc *= zi;
                }
                row
            })
            .collect();
        self.terms
            .iter()
            .map(|(idx, c)| {
                idx.0
                    .iter()
                    .enumerate()
                    .fold(*c, |acc, (j, &e)| acc * powers[j][e as usize])
            })
            .sum()
    }

    /// `ζ ↦ p(h ζ)` for a `dim × dim` matrix `h`.
    pub fn compose_linear(&self, h: &CMat) -> CPolynomial {
        let d = self.dim;
        let rows: Vec<CPolynomial> = (0..d)
            .map(|i| {
                let mut r = Poly::zero(d);
                for j in 0..d {
                    r.add_term(MultiIndex::unit(d, j), h[(i, j)]);
                }
                r
            })
            .collect();
        let mut out = Poly::zero(d);
        for (idx, c) in &self.terms {
            let mut term = Poly::constant(d, *c);
            for (i, &e) in idx.0.iter().enumerate() {
                term = &term * &rows[i].pow(e);
            }
            out = &out + &term;
        }
        out
    }

    /// Directional derivative `(ζ|∂̄) p = Σ ζ_i ∂_i p`.
    pub fn directional(&self, zeta: &CVec) -> CPolynomial {
        let mut out = Poly::zero(self.dim);
        for i in 0..self.dim {
            if zeta[i] != ZERO {
                out = &out + &self.partial(i).scale(&zeta[i]);
            }
        }
        out
    }

    /// The linear form `ζ ↦ (ζ|w)`.
    pub fn pairing_form(w: &CVec) -> CPolynomial {
        let d = w.len();
        let mut out = Poly::zero(d);
        for i in 0..d {
            out.add_term(MultiIndex::unit(d, i), w[i].conj());
        }
        out
    }

    pub fn max_coeff_diff(&self, other: &CPolynomial) -> f64 {
        let diff = self - other;
        diff.terms.values().fold(0.0, |acc, c| acc.max(c.norm()))
    }
}

impl CPolynomial {
    /// Recovers a polynomial of per-variable degree `≤ maxdeg` from its values
    /// on the torus grid of `(maxdeg+1)`-th roots of unity; terms of total
    /// degree above `maxdeg` are dropped.
    pub fn interpolate<F>(d: usize, maxdeg: usize, f: F) -> CPolynomial
    where
        F: Fn(&CVec) -> Complex64,
    {
        let m = maxdeg + 1;
        let root = |e: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / m as f64);
        let total = m.pow(d as u32);
        let mut samples = Vec::with_capacity(total);
        for flat in 0..total {
            let mut idx = flat;
            let mut point = CVec::zeros(d);
            let mut exps = vec![0usize; d];
            for j in 0..d {
                exps[j] = idx % m;
                point[j] = root(exps[j]);
                idx /= m;
            }
            samples.push((exps, f(&point)));
        }
        let mut out = CPolynomial::zero(d);
        for target in MultiIndex::up_to_degree(d, maxdeg) {
            let s: Complex64 = samples
                .iter()
                .map(|(exps, v)| {
                    let phase: usize = exps.iter().zip(&target.0).map(|(a, &b)| a * b as usize).sum();
                    v * root((m - phase % m) % m)
                })
                .sum();
            out.add_term(target, s / total as f64);
        }
        out
    }
}

impl ExactPolynomial {
    pub fn to_float(&self) -> CPolynomial {
        let mut out = Poly::zero(self.dim);
        for (i, c) in &self.terms {
            out.add_term(
                i.clone(),
                Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)),
            );
        }
        out
    }
}

impl<'a, S: Scalar> Add for &'a Poly<S> {
    type Output = Poly<S>;

    fn add(self, rhs: Self) -> Poly<S> {
        let mut out = self.clone();
        for (i, c) in &rhs.terms {
            out.add_term(i.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub for &'a Poly<S> {
    type Output = Poly<S>;

    fn sub(self, rhs: Self) -> Poly<S> {
        let mut out = self.clone();
        for (i, c) in &rhs.terms {
            out.add_term(i.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul for &'a Poly<S> {
    type Output = Poly<S>;

    fn mul(self, rhs: Self) -> Poly<S> {
        let mut acc: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                let e = acc.entry(i.add(j)).or_insert_with(S::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly { dim: self.dim, terms: acc }
    }
}

/// `Σ_I conj(p_I) q_I I!`; conjugate-linear in `p`.
pub fn fock_inner<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Result<S> {
    if p.dim != q.dim {
        return Err(SymdomError::DimensionMismatch { expected: p.dim, got: q.dim });
    }
    let mut acc = S::zero();
    for (i, a) in &p.terms {
        if let Some(b) = q.terms.get(i) {
            acc = acc + a.conj() * b.clone() * S::from_int(&i.factorial_int());
        }
    }
    Ok(acc)
}

/// `E^k(ζ, ω) = (ζ|ω)^k / k!`.
pub fn e_kernel(k: usize, zeta: &CVec, omega: &CVec) -> Complex64 {
    pairing(zeta, omega).powu(k as u32) / factorial(k)
}

/// `ζ ↦ E^k(ζ, ω)` as a polynomial.
pub fn e_kernel_poly(k: usize, omega: &CVec) -> CPolynomial {
    CPolynomial::pairing_form(omega)
        .pow(k as u32)
        .scale(&Complex64::new(1.0 / factorial(k), 0.0))
}

/// `((ζ|∂̄)^k f)(z)`: exact for polynomials, Cauchy integral otherwise.
pub fn contract_derivative(
    zeta: &CVec,
    f: &dyn Holomorphic,
    z: &CVec,
    k: usize,
    cfg: &CauchyConfig,
) -> Result<Complex64> {
    if let Some(p) = f.as_polynomial() {
        let mut q = p.clone();
        for _ in 0..k {
            q = q.directional(zeta);
        }
        return Ok(q.eval(z));
    }
    cauchy::directional_derivative(f, z, zeta, k, cfg)
}

impl Holomorphic for CPolynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &CVec) -> Complex64 {
        CPolynomial::eval(self, z)
    }

    fn as_polynomial(&self) -> Option<&CPolynomial> {
        Some(self)
    }
}
