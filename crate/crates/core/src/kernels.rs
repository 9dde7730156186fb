//! Little-space kernels `K^{ν,λ}`, monomial norms, the Faraut–Korányi
//! expansion, group actions on sections and covariance checks.
//!
//! Operator-valued kernels are handled through their scalar integral kernels
//! in doubled variables `(z, ζ)`, `(w, ω)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use crate::ball::{bergman_inverse_apply, check_interior, genus, quasi_determinant, Automorphism};
use crate::linalg::{best_phase, c, cpow, inverse, mixed_error, pairing, CMat, CVec, ONE, ZERO};
use crate::poly::{fock_inner, CPolynomial, MultiIndex};
use crate::report::{CheckReport, MaxError};
use crate::sampling::{self, ball_point, gaussian_vector};
use crate::special::{factorial, pochhammer};
use crate::{Result, SymdomError};

/// Parameters `(d, ν, λ)` of the little space `H²_ν(D, P_λ Z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LittleKernelParams {
    pub d: usize,
    pub nu: f64,
    pub lambda: usize,
}

impl LittleKernelParams {
    pub fn new(d: usize, nu: f64, lambda: usize) -> Result<Self> {
        if d == 0 || !nu.is_finite() {
            return Err(SymdomError::InvalidParameter(format!("d = {d}, ν = {nu}")));
        }
        Ok(LittleKernelParams { d, nu, lambda })
    }

    pub fn genus(&self) -> f64 {
        genus(self.d) as f64
    }
}

/// A scalar kernel in doubled variables, `K((z, ζ), (w, ω))`.
pub trait DoubledKernel: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64>;
}

/// `K^{ν,λ}_{z,w}(ζ, ω) = Δ_{z,w}^{-ν} E^λ(B^{-1}_{z,w} ζ, ω)`.
pub fn little_kernel(params: &LittleKernelParams, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64> {
    let bz = bergman_inverse_apply(z, w, zeta)?;
    let e = pairing(&bz, omega).powu(params.lambda as u32) / factorial(params.lambda);
    Ok(cpow(quasi_determinant(z, w), -params.nu) * e)
}

impl DoubledKernel for LittleKernelParams {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64> {
        little_kernel(self, z, w, zeta, omega)
    }
}

/// `‖z^I‖²_ν = I! / (ν)_{|I|}` in `H²_ν(D, C)`.
pub fn monomial_norm_sq(nu: f64, index: &MultiIndex) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(SymdomError::InvalidParameter(format!("monomial norms need ν > 0, got {nu}")));
    }
    Ok(index.factorial() / pochhammer(nu, index.degree()))
}

/// Coefficients `(ν)_k`, `k ≤ N`, of `Δ^{-ν} = Σ_k (ν)_k E^k`.
pub fn fk_expand(nu: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for k in 0..=n {
        out.push(acc);
        acc *= nu + k as f64;
    }
    out
}

/// `Σ_{k ≤ N} (ν)_k (z|w)^k / k!`.
pub fn fk_partial_sum(nu: f64, n: usize, z: &CVec, w: &CVec) -> Complex64 {
    let t = pairing(z, w);
    let mut coeff = 1.0;
    let mut power = ONE;
    let mut sum = ZERO;
    for k in 0..=n {
        sum += power * coeff;
        coeff *= (nu + k as f64) / (k as f64 + 1.0);
        power *= t;
    }
    sum
}

/// `Σ_{k > N} |(ν)_k| ρ^k / k!` summed until terms are negligible.
pub fn fk_tail_bound(nu: f64, n: usize, rho: f64) -> f64 {
    let mut coeff = 1.0;
    for k in 0..=n {
        coeff *= (nu + k as f64).abs() / (k as f64 + 1.0);
    }
    let mut power = rho.powi(n as i32 + 1);
    let mut tail = 0.0;
    for k in (n + 1)..(n + 100_000) {
        let term = coeff * power;
        tail += term;
        if term < 1e-20 * tail.max(1e-300) && k > n + 10 {
            break;
        }
        coeff *= (nu + k as f64).abs() / (k as f64 + 1.0);
        power *= rho;
    }
    tail
}

/// A section `Φ`: `z ↦ Φ_z ∈ P Z`, evaluated as `Φ_z(ζ)`.
pub trait Section: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &CVec, zeta: &CVec) -> Result<Complex64>;
    /// Distance from `z` to the boundary of the base domain; `None` if entire.
    fn margin(&self, _z: &CVec) -> Option<f64> {
        None
    }
    fn as_polynomial(&self) -> Option<&PolySection> {
        None
    }
}

/// Polynomial section stored as a polynomial in `2d` variables `(z, ζ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySection {
    d: usize,
    poly: CPolynomial,
}

fn embed(p: &CPolynomial, offset: usize, total: usize) -> CPolynomial {
    let mut out = CPolynomial::zero(total);
    for (idx, c) in p.terms() {
        let mut e = vec![0; total];
        e[offset..offset + idx.dim()].copy_from_slice(&idx.0);
        out.add_term(MultiIndex(e), *c);
    }
    out
}

fn concat(a: &CVec, b: &CVec) -> CVec {
    CVec::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

impl PolySection {
    pub fn new(d: usize, poly: CPolynomial) -> Result<Self> {
        if poly.dim() != 2 * d {
            return Err(SymdomError::DimensionMismatch { expected: 2 * d, got: poly.dim() });
        }
        Ok(PolySection { d, poly })
    }

    /// `Φ_z(ζ) = f(z) q(ζ)`.
    pub fn product(f: &CPolynomial, q: &CPolynomial) -> Result<Self> {
        if f.dim() != q.dim() {
            return Err(SymdomError::DimensionMismatch { expected: f.dim(), got: q.dim() });
        }
        let d = f.dim();
        Ok(PolySection { d, poly: &embed(f, 0, 2 * d) * &embed(q, d, 2 * d) })
    }

    /// Section with coefficient `coeffs[a]` on `z^α ζ^β` for `monomials[a] = (α, β)`.
    pub fn from_coefficients(d: usize, monomials: &[(MultiIndex, MultiIndex)], coeffs: &CVec) -> Self {
        let mut poly = CPolynomial::zero(2 * d);
        for ((a, b), c) in monomials.iter().zip(coeffs.iter()) {
            let mut e = a.0.clone();
            e.extend_from_slice(&b.0);
            poly.add_term(MultiIndex(e), *c);
        }
        PolySection { d, poly }
    }

    pub fn poly(&self) -> &CPolynomial {
        &self.poly
    }

    /// Coefficient of `z^α ζ^β`.
    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Complex64 {
        let mut e = alpha.0.clone();
        e.extend_from_slice(&beta.0);
        self.poly.coeff(&MultiIndex(e))
    }

    /// The fibre polynomial `Φ_z`.
    pub fn at(&self, z: &CVec) -> CPolynomial {
        let d = self.d;
        let mut out = CPolynomial::zero(d);
        for (idx, c) in self.poly.terms() {
            let za = MultiIndex(idx.0[..d].to_vec()).eval_monomial(z);
            out.add_term(MultiIndex(idx.0[d..].to_vec()), c * za);
        }
        out
    }

    /// `Σ_k coeffs[k] (ζ|∂_z)^k Φ` evaluated at `(z, ζ)`.
    pub fn eval_differential(&self, coeffs: &[Complex64], z: &CVec, zeta: &CVec) -> Complex64 {
        let point = concat(z, zeta);
        let direction = concat(zeta, &CVec::zeros(self.d));
        let mut current = self.poly.clone();
        let mut acc = ZERO;
        for (k, &mu) in coeffs.iter().enumerate() {
            if k > 0 {
                current = current.directional(&direction);
            }
            if mu != ZERO {
                acc += mu * current.eval(&point);
            }
        }
        acc
    }
}

impl Section for PolySection {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, z: &CVec, zeta: &CVec) -> Result<Complex64> {
        Ok(self.poly.eval(&concat(z, zeta)))
    }

    fn as_polynomial(&self) -> Option<&PolySection> {
        Some(self)
    }
}

/// `(g^{-λ_ν} Φ)_z(ζ) = det(∂_z g)^{ν/p} Φ_{g(z)}((∂_z g) ζ)`.
pub fn little_action(
    params: &LittleKernelParams,
    g: &Automorphism,
    phi: &dyn Section,
    z: &CVec,
    zeta: &CVec,
) -> Result<Complex64> {
    let det = g.jacobian_det_pow(z, params.nu / params.genus())?;
    Ok(det * phi.eval(&g.apply(z)?, &(g.derivative(z)? * zeta))?)
}

/// The transformed section `g^{-λ_ν} Φ`.
pub struct LittleTransformed<'a> {
    pub params: LittleKernelParams,
    pub g: Automorphism,
    pub phi: &'a dyn Section,
}

impl Section for LittleTransformed<'_> {
    fn dim(&self) -> usize {
        self.params.d
    }

    fn eval(&self, z: &CVec, zeta: &CVec) -> Result<Complex64> {
        little_action(&self.params, &self.g, self.phi, z, zeta)
    }

    fn margin(&self, z: &CVec) -> Option<f64> {
        Some(1.0 - crate::linalg::norm_sq(z).sqrt())
    }
}

/// The kernel section `(K_w η)_z(ζ) = Δ_{z,w}^{-ν} η(B^{-1}_{z,w} ζ)`.
pub struct KernelSection<'a> {
    pub params: LittleKernelParams,
    pub w: CVec,
    pub eta: &'a CPolynomial,
}

impl Section for KernelSection<'_> {
    fn dim(&self) -> usize {
        self.params.d
    }

    fn eval(&self, z: &CVec, zeta: &CVec) -> Result<Complex64> {
        let bz = bergman_inverse_apply(z, &self.w, zeta)?;
        Ok(cpow(quasi_determinant(z, &self.w), -self.params.nu) * self.eta.eval(&bz))
    }

    fn margin(&self, z: &CVec) -> Option<f64> {
        Some(1.0 - crate::linalg::norm_sq(z).sqrt())
    }
}

fn multinomial(m: &MultiIndex) -> f64 {
    factorial(m.degree()) / m.factorial()
}

/// Coefficient blocks of the little kernel: block `k` is the matrix `G_k`
/// with `K = Σ_k Σ_{a,b} G_k[a,b] m_a(z,ζ) conj(m_b(w,ω))` over monomials
/// `m_a = z^α ζ^β`, `|α| = k`, `|β| = λ`.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub k: usize,
    pub monomials: Vec<(MultiIndex, MultiIndex)>,
    pub gram: DMatrix<f64>,
}

/// The little space `H²_ν(D, P_λ Z)` truncated to base degree `≤ cap`.
#[derive(Clone, Debug)]
pub struct LittleSpace {
    pub params: LittleKernelParams,
    pub blocks: Vec<GramBlock>,
}

impl LittleSpace {
    /// Builds `G_0..G_cap` from
    /// `K = (1/λ!) Σ_q C(λ,q) (ζ|ω)^{λ-q} ((ζ|w)(z|ω))^q Σ_p (ν+λ+q)_p/p! (z|w)^p`.
    pub fn new(params: LittleKernelParams, cap: usize) -> Self {
        let blocks = (0..=cap).map(|k| Self::block(&params, k)).collect();
        LittleSpace { params, blocks }
    }

    fn block(params: &LittleKernelParams, k: usize) -> GramBlock {
        let (d, lam, nu) = (params.d, params.lambda, params.nu);
        let alphas = MultiIndex::of_degree(d, k);
        let betas = MultiIndex::of_degree(d, lam);
        let monomials: Vec<(MultiIndex, MultiIndex)> = alphas
            .iter()
            .flat_map(|a| betas.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let m = monomials.len();
        let q_splits: Vec<Vec<MultiIndex>> = (0..=lam.min(k)).map(|q| MultiIndex::of_degree(d, q)).collect();
        let lam_fact = factorial(lam);
        let mut gram = DMatrix::<f64>::zeros(m, m);
        for (i, (alpha, beta)) in monomials.iter().enumerate() {
            for (j, (gamma, delta)) in monomials.iter().enumerate() {
                let mut total = 0.0;
                for (q, rho2s) in q_splits.iter().enumerate() {
                    let p = k - q;
                    let weight = crate::special::binomial(lam, q) * pochhammer(nu + (lam + q) as f64, p)
                        / factorial(p)
                        / lam_fact;
                    for rho2 in rho2s {
                        let Some(rho1) = beta.checked_sub(rho2) else { continue };
                        let Some(rho4) = gamma.checked_sub(rho2) else { continue };
                        let Some(rho3) = alpha.checked_sub(&rho4) else { continue };
                        if rho1.add(&rho3) != *delta {
                            continue;
                        }
                        total += weight * multinomial(&rho1) * multinomial(rho2) * multinomial(&rho3) * multinomial(&rho4);
                    }
                }
                gram[(i, j)] = total;
            }
        }
        GramBlock { k, monomials, gram }
    }

    pub fn cap(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Truncated kernel `Σ_{k ≤ cap} m(z,ζ)^T G_k conj(m(w,ω))`.
    pub fn kernel_truncated(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Complex64 {
        let mut acc = ZERO;
        for b in &self.blocks {
            let left = monomial_values(&b.monomials, z, zeta);
            let right = monomial_values(&b.monomials, w, omega);
            for i in 0..left.len() {
                for j in 0..right.len() {
                    acc += left[i] * b.gram[(i, j)] * right[j].conj();
                }
            }
        }
        acc
    }

    /// Coefficient vector of a polynomial section on block `k`.
    pub fn block_coefficients(&self, phi: &PolySection, k: usize) -> CVec {
        let b = &self.blocks[k];
        CVec::from_iterator(b.monomials.len(), b.monomials.iter().map(|(a, bb)| phi.coeff(a, bb)))
    }

    /// `(Φ|Ψ) = Σ_k φ_k^H G_k^{-1} ψ_k` for coefficient vectors per block.
    pub fn inner(&self, phi: &[CVec], psi: &[CVec]) -> Result<Complex64> {
        let mut acc = ZERO;
        for (k, b) in self.blocks.iter().enumerate() {
            let g = b.gram.map(|x| c(x, 0.0));
            let ginv = inverse(&g).map_err(|_| SymdomError::GramSingular(k))?;
            acc += (phi[k].adjoint() * ginv * &psi[k])[(0, 0)];
        }
        Ok(acc)
    }

    /// Orthonormal basis of block `k`: columns `C` with `G_k = C C^H`, so the
    /// basis functions are `u_j = Σ_a C[a,j] m_a`.
    pub fn orthonormal_block(&self, k: usize) -> Result<CMat> {
        let b = &self.blocks[k];
        let chol = nalgebra::Cholesky::new(b.gram.clone()).ok_or(SymdomError::GramSingular(k))?;
        Ok(chol.l().map(|x| c(x, 0.0)))
    }
}

/// Values `m_a(z, ζ) = z^α ζ^β`.
pub fn monomial_values(monomials: &[(MultiIndex, MultiIndex)], z: &CVec, zeta: &CVec) -> Vec<Complex64> {
    monomials
        .iter()
        .map(|(a, b)| a.eval_monomial(z) * b.eval_monomial(zeta))
        .collect()
}

/// Taylor coefficients of a section on `z^α ζ^β`, `|α| ≤ cap`, `|β| = λ`,
/// from samples on a torus of radius `r` in `z` (`nodes` per variable) and
/// the unit torus in `ζ`. Returns one vector per block, ordered as in
/// [`LittleSpace`].
pub fn section_taylor_coefficients(
    space: &LittleSpace,
    section: &dyn Section,
    r: f64,
    nodes: usize,
) -> Result<Vec<CVec>> {
    let d = space.params.d;
    let m = space.params.lambda + 1;
    let tau = 2.0 * std::f64::consts::PI;
    let grid = |count: usize, per: usize| -> Vec<Vec<usize>> {
        (0..count)
            .map(|mut flat| {
                (0..d)
                    .map(|_| {
                        let e = flat % per;
                        flat /= per;
                        e
                    })
                    .collect()
            })
            .collect()
    };
    let zgrid = grid(nodes.pow(d as u32), nodes);
    let wgrid = grid(m.pow(d as u32), m);
    let zeta_points: Vec<CVec> = wgrid
        .iter()
        .map(|e| CVec::from_iterator(d, e.iter().map(|&j| Complex64::from_polar(1.0, tau * j as f64 / m as f64))))
        .collect();
    let betas = MultiIndex::of_degree(d, space.params.lambda);
    // fibre coefficients c_β(z_j) for every z grid point
    let mut fibre: Vec<Vec<Complex64>> = Vec::with_capacity(zgrid.len());
    for e in &zgrid {
        let z = CVec::from_iterator(d, e.iter().map(|&j| Complex64::from_polar(r, tau * j as f64 / nodes as f64)));
        let values: Vec<Complex64> = zeta_points
            .iter()
            .map(|zeta| section.eval(&z, zeta))
            .collect::<Result<_>>()?;
        let coeffs = betas
            .iter()
            .map(|b| {
                let s: Complex64 = wgrid
                    .iter()
                    .zip(&values)
                    .map(|(l, v)| {
                        let ph: usize = l.iter().zip(&b.0).map(|(a, &bb)| a * bb as usize).sum();
                        v * Complex64::from_polar(1.0, -tau * (ph % m) as f64 / m as f64)
                    })
                    .sum();
                s / zeta_points.len() as f64
            })
            .collect();
        fibre.push(coeffs);
    }
    let mut out = Vec::with_capacity(space.blocks.len());
    for b in &space.blocks {
        let v = b.monomials.iter().map(|(alpha, beta)| {
            let bi = betas.iter().position(|x| x == beta).expect("β of degree λ");
            let s: Complex64 = zgrid
                .iter()
                .zip(&fibre)
                .map(|(j, f)| {
                    let ph: usize = j.iter().zip(&alpha.0).map(|(a, &aa)| a * aa as usize).sum();
                    f[bi] * Complex64::from_polar(1.0, -tau * (ph % nodes) as f64 / nodes as f64)
                })
                .sum();
            s / (zgrid.len() as f64 * r.powi(alpha.degree() as i32))
        });
        out.push(CVec::from_iterator(b.monomials.len(), v));
    }
    Ok(out)
}

/// Sampling settings shared by the randomized checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub samples: usize,
    pub seed: u64,
    pub radius: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { samples: 20, seed: 7, radius: 0.8 }
    }
}

/// Verifies `K_{z,w}(ζ,ω) = det(∂_zγ)^{ν/p} conj(det(∂_wγ)^{ν/p}) K_{γz,γw}((∂_zγ)ζ, (∂_wγ)ω)`
/// for `γ = γ_x`.
pub fn check_little_covariance(params: &LittleKernelParams, x: &CVec, spec: &SampleSpec, tol: f64) -> Result<CheckReport> {
    check_interior(x)?;
    let g = Automorphism::transvection(x.clone())?;
    let s = params.nu / params.genus();
    let mut rng = sampling::rng(spec.seed);
    let mut lhs = Vec::with_capacity(spec.samples);
    let mut rhs = Vec::with_capacity(spec.samples);
    for _ in 0..spec.samples {
        let z = ball_point(&mut rng, params.d, spec.radius);
        let w = ball_point(&mut rng, params.d, spec.radius);
        let zeta = gaussian_vector(&mut rng, params.d);
        let omega = gaussian_vector(&mut rng, params.d);
        lhs.push(little_kernel(params, &z, &w, &zeta, &omega)?);
        let factor = g.jacobian_det_pow(&z, s)? * g.jacobian_det_pow(&w, s)?.conj();
        let moved = little_kernel(
            params,
            &g.apply(&z)?,
            &g.apply(&w)?,
            &(g.derivative(&z)? * &zeta),
            &(g.derivative(&w)? * &omega),
        )?;
        rhs.push(factor * moved);
    }
    Ok(covariance_report("little_covariance", "kernel covariance under transvections", &lhs, &rhs, tol)
        .param("d", params.d)
        .param("nu", params.nu)
        .param("lambda", params.lambda)
        .param("x", crate::interchange::vector_to_json(x).iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>()))
}

/// Report comparing `lhs ≈ c·rhs` for a single unimodular `c`, plus the raw
/// and modulus-only errors.
pub fn covariance_report(name: &str, anchor: &str, lhs: &[Complex64], rhs: &[Complex64], tol: f64) -> CheckReport {
    let phase = best_phase(lhs, rhs);
    let (mut aligned, mut raw, mut modulus) = (MaxError::default(), MaxError::default(), MaxError::default());
    for (a, b) in lhs.iter().zip(rhs) {
        aligned.push(mixed_error(*a, phase * b));
        raw.push(mixed_error(*a, *b));
        modulus.push((a.norm() - b.norm()).abs() / a.norm().max(1.0));
    }
    CheckReport::new(name, anchor, lhs.len(), aligned.0, tol)
        .with_extra("raw_error", raw.0)
        .with_extra("modulus_error", modulus.0)
        .with_extra("phase", vec![phase.re, phase.im])
}

/// Numerical settings for [`check_reproducing`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReproducingSpec {
    pub cap: usize,
    pub torus_radius: f64,
    pub torus_nodes: usize,
    pub point_radius: f64,
}

impl Default for ReproducingSpec {
    fn default() -> Self {
        ReproducingSpec { cap: 4, torus_radius: 0.5, torus_nodes: 48, point_radius: 0.5 }
    }
}

/// Verifies `(Φ | K_w η) = (Φ_w | η)_F` for random polynomial sections `Φ` of
/// base degree `≤ cap`. The inner product comes from the kernel's own Taylor
/// blocks; the Taylor coefficients of `K_w η` are extracted numerically from
/// its closed form.
pub fn check_reproducing(params: &LittleKernelParams, rs: &ReproducingSpec, spec: &SampleSpec, tol: f64) -> Result<CheckReport> {
    if !(params.nu > 0.0) {
        return Err(SymdomError::InvalidParameter(format!("reproducing check needs ν > 0, got {}", params.nu)));
    }
    let space = LittleSpace::new(*params, rs.cap);
    let d = params.d;
    let mut rng = sampling::rng(spec.seed);
    let mut err = MaxError::default();
    for _ in 0..spec.samples {
        let phi_blocks: Vec<CVec> = space
            .blocks
            .iter()
            .map(|b| CVec::from_fn(b.monomials.len(), |_, _| sampling::gaussian_complex(&mut rng)))
            .collect();
        let all_monomials: Vec<_> = space.blocks.iter().flat_map(|b| b.monomials.clone()).collect();
        let flat = CVec::from_iterator(all_monomials.len(), phi_blocks.iter().flat_map(|v| v.iter().copied()));
        let phi = PolySection::from_coefficients(d, &all_monomials, &flat);
        let w = ball_point(&mut rng, d, rs.point_radius);
        let eta = sampling::polynomial(&mut rng, d, params.lambda..=params.lambda);
        let kw = KernelSection { params: *params, w: w.clone(), eta: &eta };
        let psi = section_taylor_coefficients(&space, &kw, rs.torus_radius, rs.torus_nodes)?;
        let lhs = space.inner(&phi_blocks, &psi)?;
        let rhs = fock_inner(&phi.at(&w), &eta)?;
        err.push((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok(CheckReport::new("reproducing", "reproducing kernel property", spec.samples, err.0, tol)
        .param("d", d)
        .param("nu", params.nu)
        .param("lambda", params.lambda)
        .param("cap", rs.cap))
}
