//! Intertwining operators `I_λ` from the little spaces into the big space,
//! the big kernel `K^{ν,c}` and its `K`-invariant value at the origin.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::ball::{bergman_apply, genus, quasi_determinant, quasi_inverse, Automorphism};
use crate::cauchy::{CauchyConfig, Holomorphic};
use crate::kernels::{
    covariance_report, DoubledKernel, KernelSection, LittleKernelParams, LittleSpace, LittleTransformed, PolySection,
    SampleSpec, Section,
};
use crate::linalg::{c, cpow, ipow, norm_sq, pairing, CVec, ONE, ZERO};
use crate::poly::{contract_derivative, CPolynomial, MultiIndex};
use crate::quadrature::jacobi_rule;
use crate::report::{CheckReport, MaxError};
use crate::sampling::{self, ball_point};
use crate::special::{factorial, gen_binomial, pochhammer, pochhammer_nonzero};
use crate::{Result, SymdomError};

/// `μ_k = (λ-n)_k / (ν+2λ)_k`, `k = 0..=n-λ`; `I_λ = Σ_k μ_k (ζ|∂̄)^k / k!`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntertwinerCoeffs {
    pub nu: f64,
    pub n: usize,
    pub lambda: usize,
    pub mu: Vec<f64>,
}

pub fn intertwiner_coeffs(nu: f64, n: usize, lambda: usize) -> Result<IntertwinerCoeffs> {
    if lambda > n {
        return Err(SymdomError::InvalidParameter(format!("λ = {lambda} exceeds n = {n}")));
    }
    let a = lambda as f64 - n as f64;
    let mu = (0..=n - lambda)
        .map(|k| Ok(pochhammer(a, k) / pochhammer_nonzero(nu + 2.0 * lambda as f64, k)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(IntertwinerCoeffs { nu, n, lambda, mu })
}

impl IntertwinerCoeffs {
    /// Coefficients of the powers `(ζ|∂̄)^k`, i.e. `μ_k / k!`.
    pub fn differential(&self) -> Vec<Complex64> {
        self.mu.iter().enumerate().map(|(k, m)| c(m / factorial(k), 0.0)).collect()
    }
}

/// `(I_λ(f ⊗ q))_z(ζ) = Σ_k μ_k/k! ((ζ|∂̄)^k f)(z) q(ζ)`.
pub fn apply_intertwiner(
    coeffs: &IntertwinerCoeffs,
    f: &dyn Holomorphic,
    q: &CPolynomial,
    z: &CVec,
    zeta: &CVec,
    cfg: &CauchyConfig,
) -> Result<Complex64> {
    if !q.is_homogeneous(coeffs.lambda) {
        return Err(SymdomError::InvalidParameter(format!("q must be homogeneous of degree {}", coeffs.lambda)));
    }
    let mut acc = ZERO;
    for (k, mu) in coeffs.differential().into_iter().enumerate() {
        acc += mu * contract_derivative(zeta, f, z, k, cfg)?;
    }
    Ok(acc * q.eval(zeta))
}

/// Taylor coefficients of `t ↦ Φ(z + tζ, ζ)` up to order `kmax`.
fn section_directional_taylor(
    phi: &dyn Section,
    z: &CVec,
    zeta: &CVec,
    kmax: usize,
    cfg: &CauchyConfig,
) -> Result<Vec<Complex64>> {
    let len = norm_sq(zeta).sqrt();
    if len == 0.0 || kmax == 0 {
        let mut out = vec![ZERO; kmax + 1];
        out[0] = phi.eval(z, zeta)?;
        return Ok(out);
    }
    if let Some(margin) = phi.margin(z) {
        if cfg.radius >= margin {
            return Err(SymdomError::AnalyticityRadius { radius: cfg.radius, margin });
        }
    }
    let r = cfg.radius / len;
    let tau = 2.0 * std::f64::consts::PI;
    let values = (0..cfg.nodes)
        .map(|j| phi.eval(&(z + zeta * Complex64::from_polar(r, tau * j as f64 / cfg.nodes as f64)), zeta))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=kmax)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -tau * ((k * j) % cfg.nodes) as f64 / cfg.nodes as f64))
                .sum();
            s / (cfg.nodes as f64 * r.powi(k as i32))
        })
        .collect())
}

/// `(I_λ Φ)_z(ζ)` for a section `Φ` of the little space: exact for
/// polynomial sections, Cauchy integrals otherwise.
pub fn apply_intertwiner_section(
    coeffs: &IntertwinerCoeffs,
    phi: &dyn Section,
    z: &CVec,
    zeta: &CVec,
    cfg: &CauchyConfig,
) -> Result<Complex64> {
    if let Some(p) = phi.as_polynomial() {
        return Ok(p.eval_differential(&coeffs.differential(), z, zeta));
    }
    let taylor = section_directional_taylor(phi, z, zeta, coeffs.mu.len() - 1, cfg)?;
    Ok(taylor.iter().zip(&coeffs.mu).map(|(t, m)| t * m).sum())
}

/// The section `I_λ Φ` of the big space.
pub struct IntertwinedSection<'a> {
    pub coeffs: IntertwinerCoeffs,
    pub phi: &'a dyn Section,
    pub cauchy: CauchyConfig,
}

impl Section for IntertwinedSection<'_> {
    fn dim(&self) -> usize {
        self.phi.dim()
    }

    fn eval(&self, z: &CVec, zeta: &CVec) -> Result<Complex64> {
        apply_intertwiner_section(&self.coeffs, self.phi, z, zeta, &self.cauchy)
    }

    fn margin(&self, z: &CVec) -> Option<f64> {
        self.phi.margin(z).map(|m| m - self.cauchy.radius)
    }
}

/// Closed form `Δ^n_{z+ζ,w} Δ^{-ν-n}_{z,w} q((z+ζ)^w - z^w)` of `I_λ` on the
/// kernel section `K_w q`.
pub fn intertwiner_on_kernel(
    params: &LittleKernelParams,
    n: usize,
    w: &CVec,
    q: &CPolynomial,
    z: &CVec,
    zeta: &CVec,
) -> Result<Complex64> {
    let zz = z + zeta;
    let shifted = quasi_inverse(&zz, w)? - quasi_inverse(z, w)?;
    let num = ipow(quasi_determinant(&zz, w), n as i64);
    let den = cpow(quasi_determinant(z, w), -(params.nu + n as f64));
    Ok(num * den * q.eval(&shifted))
}

/// Report for `lhs ≈ c · rhs` with one complex constant `c` fitted by least
/// squares; errors are relative to `max |lhs|`.
pub fn ratio_report(name: &str, anchor: &str, lhs: &[Complex64], rhs: &[Complex64], tol: f64) -> CheckReport {
    let num: Complex64 = lhs.iter().zip(rhs).map(|(a, b)| b.conj() * a).sum();
    let den: f64 = rhs.iter().map(|b| b.norm_sqr()).sum();
    let ratio = if den > 0.0 { num / den } else { ZERO };
    let scale = lhs.iter().map(|a| a.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut err = MaxError::default();
    for (a, b) in lhs.iter().zip(rhs) {
        err.push((a - ratio * b).norm() / scale);
    }
    CheckReport::new(name, anchor, lhs.len(), err.0, tol).with_extra("ratio", vec![ratio.re, ratio.im])
}

/// Compares the differential form of `I_λ` on `K_w q` with the closed form.
pub fn check_intertwiner_kernel(
    params: &LittleKernelParams,
    n: usize,
    spec: &SampleSpec,
    cauchy: &CauchyConfig,
    tol: f64,
) -> Result<CheckReport> {
    let coeffs = intertwiner_coeffs(params.nu, n, params.lambda)?;
    let d = params.d;
    let mut rng = sampling::rng(spec.seed);
    let (mut closed, mut differential) = (Vec::new(), Vec::new());
    for _ in 0..spec.samples {
        let w = ball_point(&mut rng, d, spec.radius);
        let z = ball_point(&mut rng, d, spec.radius);
        let zeta = ball_point(&mut rng, d, spec.radius);
        let q = sampling::polynomial(&mut rng, d, params.lambda..=params.lambda);
        closed.push(intertwiner_on_kernel(params, n, &w, &q, &z, &zeta)?);
        let section = KernelSection { params: *params, w, eta: &q };
        differential.push(apply_intertwiner_section(&coeffs, &section, &z, &zeta, cauchy)?);
    }
    Ok(ratio_report(
        "intertwiner_kernel",
        "intertwiner on reproducing kernel functions: differential vs closed form",
        &closed,
        &differential,
        tol,
    )
    .param("d", d)
    .param("nu", params.nu)
    .param("n", n)
    .param("lambda", params.lambda))
}

/// Binomial argument used in the `κ` coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaVariant {
    /// `C(ν+λ-1, p)`.
    Theorem,
    /// `C(ν+ℓ-1, p)`.
    Proof,
}

impl KappaVariant {
    pub const ALL: [KappaVariant; 2] = [KappaVariant::Theorem, KappaVariant::Proof];

    pub fn name(&self) -> &'static str {
        match self {
            KappaVariant::Theorem => "theorem",
            KappaVariant::Proof => "proof",
        }
    }
}

impl std::str::FromStr for KappaVariant {
    type Err = SymdomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(KappaVariant::Theorem),
            "proof" => Ok(KappaVariant::Proof),
            other => Err(SymdomError::InvalidParameter(format!("unknown κ variant {other:?}"))),
        }
    }
}

/// Lower-triangular `κ[ℓ, λ] = κ^λ_ℓ(ν)` with
/// `κ^λ_ℓ = ((λ-n)_{ℓ-λ} / (ν+2λ)_{ℓ-λ})² Σ_{p+q=ℓ-λ} C(·, p) C(λ, q)`.
pub fn kappa_matrix(nu: f64, n: usize, variant: KappaVariant) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for lam in 0..=n {
        for ell in lam..=n {
            let j = ell - lam;
            let mu = pochhammer(lam as f64 - n as f64, j) / pochhammer_nonzero(nu + 2.0 * lam as f64, j)?;
            let top = match variant {
                KappaVariant::Theorem => nu + lam as f64 - 1.0,
                KappaVariant::Proof => nu + ell as f64 - 1.0,
            };
            let sum: f64 = (0..=j).map(|p| gen_binomial(top, p) * gen_binomial(lam as f64, j - p)).sum();
            m[(ell, lam)] = mu * mu * sum;
        }
    }
    Ok(m)
}

/// The weight matrix `A[ℓ, λ] = κ^λ_ℓ ℓ!/λ!`, so that `a_ℓ ℓ! = (A c)_ℓ`.
pub fn weight_matrix(nu: f64, n: usize, variant: KappaVariant) -> Result<DMatrix<f64>> {
    let mut k = kappa_matrix(nu, n, variant)?;
    for ell in 0..=n {
        for lam in 0..=ell {
            k[(ell, lam)] *= factorial(ell) / factorial(lam);
        }
    }
    Ok(k)
}

/// Parameters of the big space `H²_ν(D, P^n Z)` with weights `c_0..c_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BigKernelParams {
    pub d: usize,
    pub nu: f64,
    pub n: usize,
    pub c: Vec<f64>,
}

impl BigKernelParams {
    pub fn new(d: usize, nu: f64, n: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != n + 1 {
            return Err(SymdomError::DimensionMismatch { expected: n + 1, got: c.len() });
        }
        if c.iter().any(|&x| !(x >= 0.0)) {
            return Err(SymdomError::InvalidParameter("weights c must be non-negative".into()));
        }
        if d == 0 || !nu.is_finite() {
            return Err(SymdomError::InvalidParameter(format!("d = {d}, ν = {nu}")));
        }
        Ok(BigKernelParams { d, nu, n, c })
    }
}

/// A `K`-invariant kernel `Σ_ℓ a_ℓ (ζ|ω)^ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KInvariantKernel {
    pub a: Vec<f64>,
}

impl KInvariantKernel {
    pub fn eval(&self, zeta: &CVec, omega: &CVec) -> Complex64 {
        let t = pairing(zeta, omega);
        self.a.iter().enumerate().map(|(l, a)| t.powu(l as u32) * *a).sum()
    }

    /// Degree-block eigenvalues `a_ℓ ℓ!` of the kernel as an operator on
    /// `P^n Z` with the Fock metric.
    pub fn operator_diagonal(&self) -> Vec<f64> {
        self.a.iter().enumerate().map(|(l, a)| a * factorial(l)).collect()
    }
}

/// `a_ℓ = Σ_{λ ≤ ℓ} κ^λ_ℓ c_λ / λ!`.
pub fn big_kernel_origin(params: &BigKernelParams, variant: KappaVariant) -> Result<KInvariantKernel> {
    let k = kappa_matrix(params.nu, params.n, variant)?;
    let a = (0..=params.n)
        .map(|ell| (0..=ell).map(|lam| k[(ell, lam)] * params.c[lam] / factorial(lam)).sum())
        .collect();
    Ok(KInvariantKernel { a })
}

/// Result of the orthonormal-basis computation at the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OriginOracle {
    pub kernel: KInvariantKernel,
    /// Largest deviation of the computed sesqui-polynomial from `Σ a_ℓ (ζ|ω)^ℓ`.
    pub k_invariance_defect: f64,
}

/// `K^{ν,c}_{0,0}` from `Σ_λ c_λ Σ_a (I_λ Φ^a)_0 ⊗ conj(I_λ Φ^a)_0` over an
/// orthonormal basis `Φ^a` of each little space, built by Cholesky from its
/// Gram blocks. Only base degrees `≤ n - λ` survive at the origin.
pub fn big_kernel_origin_oracle(params: &BigKernelParams) -> Result<OriginOracle> {
    let (d, n) = (params.d, params.n);
    // coefficient of ζ^γ conj(ω^δ), keyed by (γ, δ) of equal degree
    let mut coeffs: std::collections::BTreeMap<(MultiIndex, MultiIndex), f64> = Default::default();
    for lam in 0..=n {
        if params.c[lam] == 0.0 {
            continue;
        }
        let mu = intertwiner_coeffs(params.nu, n, lam)?;
        let space = LittleSpace::new(LittleKernelParams::new(d, params.nu, lam)?, n - lam);
        for k in 0..=n - lam {
            let onb = space.orthonormal_block(k)?;
            let block = &space.blocks[k];
            // (I_λ u_j)(0, ζ) = μ_k Σ_a C[a,j] ζ^{α_a+β_a}
            let images: Vec<MultiIndex> = block.monomials.iter().map(|(a, b)| a.add(b)).collect();
            for j in 0..onb.ncols() {
                for (x, gx) in images.iter().enumerate() {
                    for (y, gy) in images.iter().enumerate() {
                        let v = params.c[lam] * mu.mu[k] * mu.mu[k] * (onb[(x, j)] * onb[(y, j)].conj()).re;
                        *coeffs.entry((gx.clone(), gy.clone())).or_insert(0.0) += v;
                    }
                }
            }
        }
    }
    let a: Vec<f64> = (0..=n)
        .map(|ell| {
            let key = MultiIndex(std::iter::once(ell as u32).chain(std::iter::repeat(0).take(d - 1)).collect());
            coeffs.get(&(key.clone(), key)).copied().unwrap_or(0.0)
        })
        .collect();
    let mut defect: f64 = 0.0;
    for ((g, h), v) in &coeffs {
        let want = if g == h { a[g.degree()] * factorial(g.degree()) / g.factorial() } else { 0.0 };
        defect = defect.max((v - want).abs());
    }
    Ok(OriginOracle { kernel: KInvariantKernel { a }, k_invariance_defect: defect })
}

/// Both `κ` variants compared against the oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariantResolution {
    pub oracle: Vec<f64>,
    pub theorem: Vec<f64>,
    pub proof: Vec<f64>,
    pub theorem_error: f64,
    pub proof_error: f64,
    /// The variants matching the oracle within the tolerance.
    pub matching: Vec<KappaVariant>,
    pub k_invariance_defect: f64,
}

impl VariantResolution {
    pub fn selected(&self) -> Option<KappaVariant> {
        match self.matching.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }
}

pub fn resolve_kappa_variant(params: &BigKernelParams, tol: f64) -> Result<VariantResolution> {
    let oracle = big_kernel_origin_oracle(params)?;
    let err = |v: &[f64]| {
        v.iter()
            .zip(&oracle.kernel.a)
            .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
            .fold(0.0, f64::max)
    };
    let theorem = big_kernel_origin(params, KappaVariant::Theorem)?.a;
    let proof = big_kernel_origin(params, KappaVariant::Proof)?.a;
    let (te, pe) = (err(&theorem), err(&proof));
    let matching = [(KappaVariant::Theorem, te), (KappaVariant::Proof, pe)]
        .into_iter()
        .filter(|(_, e)| *e <= tol)
        .map(|(v, _)| v)
        .collect();
    Ok(VariantResolution {
        oracle: oracle.kernel.a,
        theorem,
        proof,
        theorem_error: te,
        proof_error: pe,
        matching,
        k_invariance_defect: oracle.k_invariance_defect,
    })
}

/// `(I_λ m)(z, ζ)` for `m = z^α ζ^β`:
/// `ζ^β Σ_j μ_j Σ_{|γ|=j, γ≤α} C(α,γ) ζ^γ z^{α-γ}`.
fn intertwined_monomial(mu: &[f64], alpha: &MultiIndex, beta: &MultiIndex, z: &CVec, zeta: &CVec) -> Complex64 {
    let d = alpha.dim();
    let mut acc = ZERO;
    for (j, m) in mu.iter().enumerate() {
        if j > alpha.degree() {
            break;
        }
        for gamma in MultiIndex::of_degree(d, j) {
            if let Some(rest) = alpha.checked_sub(&gamma) {
                acc += gamma.eval_monomial(zeta) * rest.eval_monomial(z) * (m * alpha.binomial(&gamma));
            }
        }
    }
    acc * beta.eval_monomial(zeta)
}

/// The big kernel `K^{ν,c}` by truncated sums over the little-space bases.
#[derive(Clone, Debug)]
pub struct BigKernel {
    pub params: BigKernelParams,
    pub tol: f64,
    spaces: Vec<(IntertwinerCoeffs, LittleSpace)>,
}

/// Value of the truncated sum and the estimated truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedValue {
    pub value: Complex64,
    pub tail: f64,
}

impl BigKernel {
    pub fn new(params: BigKernelParams, cap: usize, tol: f64) -> Result<Self> {
        if cap < params.n.max(2) {
            return Err(SymdomError::InvalidParameter(format!("truncation cap {cap} too small")));
        }
        let spaces = (0..=params.n)
            .map(|lam| {
                Ok((
                    intertwiner_coeffs(params.nu, params.n, lam)?,
                    LittleSpace::new(LittleKernelParams::new(params.d, params.nu, lam)?, cap),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BigKernel { params, tol, spaces })
    }

    pub fn cap(&self) -> usize {
        self.spaces[0].1.cap()
    }

    fn block_vectors(&self, lam: usize, k: usize, z: &CVec, zeta: &CVec) -> Vec<Complex64> {
        let (coeffs, space) = &self.spaces[lam];
        space.blocks[k]
            .monomials
            .iter()
            .map(|(a, b)| intertwined_monomial(&coeffs.mu, a, b, z, zeta))
            .collect()
    }

    fn block_form(&self, k: usize, left: &[Vec<Complex64>], right: &[Vec<Complex64>]) -> Complex64 {
        let mut acc = ZERO;
        for (lam, (_, space)) in self.spaces.iter().enumerate() {
            let weight = self.params.c[lam];
            if weight == 0.0 {
                continue;
            }
            let g = &space.blocks[k].gram;
            let mut s = ZERO;
            for (i, l) in left[lam].iter().enumerate() {
                let row: Complex64 = right[lam].iter().enumerate().map(|(j, r)| r.conj() * g[(i, j)]).sum();
                s += l * row;
            }
            acc += s * weight;
        }
        acc
    }

    /// Truncated value with a geometric tail estimate from the diagonal
    /// block norms; errors if the estimate exceeds `tol`.
    pub fn eval_truncated(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<TruncatedValue> {
        let cap = self.cap();
        let mut value = ZERO;
        let mut sizes = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let vz: Vec<_> = (0..=self.params.n).map(|l| self.block_vectors(l, k, z, zeta)).collect();
            let vw: Vec<_> = (0..=self.params.n).map(|l| self.block_vectors(l, k, w, omega)).collect();
            value += self.block_form(k, &vz, &vw);
            let dz = self.block_form(k, &vz, &vz).norm();
            let dw = self.block_form(k, &vw, &vw).norm();
            sizes.push((dz * dw).sqrt());
        }
        let last = sizes[cap];
        let ratio = [sizes[cap] / sizes[cap - 1], sizes[cap - 1] / sizes[cap - 2]]
            .into_iter()
            .map(|r| if r.is_nan() { 0.0 } else { r })
            .fold(0.0, f64::max);
        let tail = if last == 0.0 {
            0.0
        } else if ratio >= 1.0 {
            f64::INFINITY
        } else {
            last * ratio / (1.0 - ratio)
        };
        if tail > self.tol * value.norm().max(1.0) {
            return Err(SymdomError::TailBound { estimate: tail, tol: self.tol, cap });
        }
        Ok(TruncatedValue { value, tail })
    }
}

impl DoubledKernel for BigKernel {
    fn dim(&self) -> usize {
        self.params.d
    }

    fn eval(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64> {
        Ok(self.eval_truncated(z, w, zeta, omega)?.value)
    }
}

/// `m(z,ζ) = det(∂_z g)^{(ν+n)/p} det(∂_{z+ζ} g)^{-n/p}`.
pub fn big_multiplier(d: usize, nu: f64, n: usize, g: &Automorphism, z: &CVec, zeta: &CVec) -> Result<Complex64> {
    let p = genus(d) as f64;
    Ok(g.jacobian_det_pow(z, (nu + n as f64) / p)? * g.jacobian_det_pow(&(z + zeta), -(n as f64) / p)?)
}

/// `(g Ψ)_z(ζ) = m(z,ζ) Ψ_{g(z)}(g(z+ζ) - g(z))`.
pub fn big_action(d: usize, nu: f64, n: usize, g: &Automorphism, psi: &dyn Section, z: &CVec, zeta: &CVec) -> Result<Complex64> {
    let m = big_multiplier(d, nu, n, g, z, zeta)?;
    Ok(m * psi.eval(&g.apply(z)?, &g.cocycle_apply(z, zeta)?)?)
}

/// Verifies `K(z,w,ζ,ω) = m(z,ζ) conj(m(w,ω)) K(γz, γw, σ(z,ζ), σ(w,ω))` with
/// `σ(z,ζ) = γ(z+ζ) - γz`, for `γ = γ_x`. Base and fibre points are sampled
/// in the ball of radius `spec.radius`.
pub fn check_big_covariance(kernel: &BigKernel, x: &CVec, spec: &SampleSpec, tol: f64) -> Result<CheckReport> {
    let p = &kernel.params;
    let g = Automorphism::transvection(x.clone())?;
    let mut rng = sampling::rng(spec.seed);
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for _ in 0..spec.samples {
        let z = ball_point(&mut rng, p.d, spec.radius);
        let w = ball_point(&mut rng, p.d, spec.radius);
        let zeta = ball_point(&mut rng, p.d, spec.radius);
        let omega = ball_point(&mut rng, p.d, spec.radius);
        lhs.push(kernel.eval(&z, &w, &zeta, &omega)?);
        let factor = big_multiplier(p.d, p.nu, p.n, &g, &z, &zeta)? * big_multiplier(p.d, p.nu, p.n, &g, &w, &omega)?.conj();
        let moved = kernel.eval(&g.apply(&z)?, &g.apply(&w)?, &g.cocycle_apply(&z, &zeta)?, &g.cocycle_apply(&w, &omega)?)?;
        rhs.push(factor * moved);
    }
    Ok(covariance_report("big_covariance", "big kernel covariance under transvections", &lhs, &rhs, tol)
        .param("d", p.d)
        .param("nu", p.nu)
        .param("n", p.n)
        .param("c", p.c.clone())
        .param("cap", kernel.cap()))
}

/// Verifies `g(I_λ Φ) = I_λ(g Φ)` pointwise for `g = γ_x` and random
/// polynomial sections `Φ`; the right side differentiates the transformed
/// section by Cauchy integrals.
pub fn check_pointwise_intertwining(
    params: &LittleKernelParams,
    n: usize,
    spec: &SampleSpec,
    cauchy: &CauchyConfig,
    tol: f64,
) -> Result<CheckReport> {
    let d = params.d;
    let coeffs = intertwiner_coeffs(params.nu, n, params.lambda)?;
    let mut rng = sampling::rng(spec.seed);
    let mut err = MaxError::default();
    let mut raw = MaxError::default();
    for _ in 0..spec.samples {
        let x = ball_point(&mut rng, d, spec.radius);
        let g = Automorphism::transvection(x)?;
        let f = sampling::polynomial(&mut rng, d, 0..=3);
        let q = sampling::polynomial(&mut rng, d, params.lambda..=params.lambda);
        let phi = PolySection::product(&f, &q)?;
        let z = ball_point(&mut rng, d, spec.radius);
        let zeta = ball_point(&mut rng, d, spec.radius);
        let image = IntertwinedSection { coeffs: coeffs.clone(), phi: &phi, cauchy: *cauchy };
        let lhs = big_action(d, params.nu, n, &g, &image, &z, &zeta)?;
        let moved = LittleTransformed { params: *params, g: g.clone(), phi: &phi };
        let rhs = apply_intertwiner_section(&coeffs, &moved, &z, &zeta, cauchy)?;
        let report = covariance_report("", "", &[lhs], &[rhs], tol);
        err.push(report.max_error);
        raw.push(crate::linalg::mixed_error(lhs, rhs));
    }
    Ok(CheckReport::new(
        "pointwise_intertwining",
        "big action after I_λ equals I_λ after little action",
        spec.samples,
        err.0,
        tol,
    )
    .with_extra("raw_error", raw.0)
    .param("d", d)
    .param("nu", params.nu)
    .param("n", n)
    .param("lambda", params.lambda))
}

/// Node counts for the disk integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskQuadrature {
    pub radial: usize,
    pub angular: usize,
}

impl Default for DiskQuadrature {
    fn default() -> Self {
        DiskQuadrature { radial: 200, angular: 256 }
    }
}

/// `∫_D Δ^ν_{x,x} Δ^n_{z+ζ,x} Δ^{-ν-n}_{z,x} f(x) q(B_{x,x}((z+ζ)^x - z^x)) dμ(x)`
/// on the unit disk with the invariant measure, normalized so that
/// `∫ Δ^ν_{x,x} dμ = 1`. Radial Gauss–Jacobi in `s = 2|x|² - 1`, angular
/// trapezoid.
pub fn intertwine_integral_disk(
    nu: f64,
    n: usize,
    f: &CPolynomial,
    q: &CPolynomial,
    z: &CVec,
    zeta: &CVec,
    quad: &DiskQuadrature,
) -> Result<Complex64> {
    if f.dim() != 1 || q.dim() != 1 || z.len() != 1 || zeta.len() != 1 {
        return Err(SymdomError::InvalidParameter("the disk integral needs d = 1".into()));
    }
    if !(nu > 1.0) {
        return Err(SymdomError::InvalidParameter(format!("the disk integral needs ν > 1, got {nu}")));
    }
    let zz = z + zeta;
    if norm_sq(&zz) >= 1.0 || norm_sq(z) >= 1.0 {
        return Err(SymdomError::NotInterior(norm_sq(&zz).max(norm_sq(z)).sqrt()));
    }
    let radial = jacobi_rule(quad.radial, nu - 2.0, 0.0)?;
    let tau = 2.0 * std::f64::consts::PI;
    let mut acc = ZERO;
    for &(s, wr) in &radial {
        let r = ((1.0 + s) / 2.0).sqrt();
        let mut ring = ZERO;
        for j in 0..quad.angular {
            let x = CVec::from_element(1, Complex64::from_polar(r, tau * j as f64 / quad.angular as f64));
            let v = quasi_inverse(&zz, &x)? - quasi_inverse(z, &x)?;
            let arg = bergman_apply(&x, &x, &v);
            ring += ipow(quasi_determinant(&zz, &x), n as i64)
                * cpow(quasi_determinant(z, &x), -(nu + n as f64))
                * f.eval(&x)
                * q.eval(&arg);
        }
        acc += ring * (wr * tau / quad.angular as f64);
    }
    // dx = (1/4) ds dθ and (1-|x|²)^{ν-2} = ((1-s)/2)^{ν-2}; total mass π/(ν-1)
    let jac = 0.25 * 0.5f64.powf(nu - 2.0);
    Ok(acc * (jac * (nu - 1.0) / std::f64::consts::PI))
}

/// Ratio constancy of the disk integral against the differential intertwiner.
pub fn check_disk_integral(
    nu: f64,
    n: usize,
    lambda: usize,
    spec: &SampleSpec,
    quad: &DiskQuadrature,
    tol: f64,
) -> Result<CheckReport> {
    let coeffs = intertwiner_coeffs(nu, n, lambda)?;
    let mut rng = sampling::rng(spec.seed);
    let f = sampling::polynomial(&mut rng, 1, 0..=3);
    let q = CPolynomial::monomial(MultiIndex(vec![lambda as u32]), ONE);
    let (mut integral, mut differential) = (Vec::new(), Vec::new());
    for _ in 0..spec.samples {
        let z = ball_point(&mut rng, 1, spec.radius);
        let zeta = ball_point(&mut rng, 1, spec.radius);
        integral.push(intertwine_integral_disk(nu, n, &f, &q, &z, &zeta, quad)?);
        differential.push(apply_intertwiner(&coeffs, &f, &q, &z, &zeta, &CauchyConfig::default())?);
    }
    Ok(ratio_report(
        "disk_integral",
        "integral intertwiner on the disk vs differential form",
        &integral,
        &differential,
        tol,
    )
    .param("nu", nu)
    .param("n", n)
    .param("lambda", lambda)
    .param("radial_nodes", quad.radial)
    .param("angular_nodes", quad.angular))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        let c = intertwiner_coeffs(2.0, 2, 0).unwrap();
        assert_eq!(c.mu.len(), 3);
        assert!((c.mu[1] + 1.0).abs() < 1e-15 && (c.mu[2] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(intertwiner_coeffs(3.3, 4, 4).unwrap().mu, vec![1.0]);
        assert!(intertwiner_coeffs(-1.0, 2, 0).is_err());
        assert!(intertwiner_coeffs(1.0, 1, 2).is_err());
    }

    #[test]
    fn kappa_examples() {
        let nu = 2.7;
        let t = kappa_matrix(nu, 1, KappaVariant::Theorem).unwrap();
        let p = kappa_matrix(nu, 1, KappaVariant::Proof).unwrap();
        assert!((t[(1, 0)] - (nu - 1.0) / (nu * nu)).abs() < 1e-14);
        assert!((p[(1, 0)] - 1.0 / nu).abs() < 1e-14);
        for v in KappaVariant::ALL {
            let k = kappa_matrix(3.1, 3, v).unwrap();
            for i in 0..4 {
                assert_eq!(k[(i, i)], 1.0);
                for j in i + 1..4 {
                    assert_eq!(k[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn origin_kernel_examples() {
        let p = BigKernelParams::new(1, 2.5, 1, vec![1.0, 1.0]).unwrap();
        let oracle = big_kernel_origin_oracle(&p).unwrap();
        assert!((oracle.kernel.a[1] - 1.4).abs() < 1e-12);
        let top = BigKernelParams::new(2, 4.0, 2, vec![0.0, 0.0, 3.0]).unwrap();
        let a = big_kernel_origin(&top, KappaVariant::Theorem).unwrap().a;
        assert_eq!(&a[..2], &[0.0, 0.0]);
        assert!((a[2] - 1.5).abs() < 1e-15);
    }
}
