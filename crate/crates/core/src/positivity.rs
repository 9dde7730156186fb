//! Positivity of kernels on sampled jet points, the scalar boundedness
//! coefficients, Wallach scans, weight transfer, the coordinate-multiplier
//! diagonal and the commutant probe.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{quasi_determinant, quasi_inverse};
use crate::fibre::{metric_adjoint, tau_bar_pi_n, FibreMetric, FibreOperator, GradedBasis};
use crate::interchange::{vector_to_json, ComplexJson};
use crate::intertwine::{big_kernel_origin, weight_matrix, BigKernelParams, KappaVariant};
use crate::kernels::{DoubledKernel, LittleKernelParams};
use crate::linalg::{c, pairing, CMat, CVec, ZERO};
use crate::poly::MultiIndex;
use crate::report::CheckReport;
use crate::sampling::{self, ball_point, gaussian_vector};
use crate::special::pochhammer;
use crate::{Result, SymdomError};

/// Default relative PSD tolerance.
pub const TOL_PSD: f64 = 1e-9;

/// Hermitian defect above which a Gram matrix signals a kernel bug.
const HERMITIAN_TOL: f64 = 1e-8;

/// A point `(z, ζ)` of the doubled space.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    pub z: CVec,
    pub zeta: CVec,
}

/// Sample points and tolerance for a Gram test.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSpec {
    pub points: Vec<JetPoint>,
    pub tol_psd: f64,
    pub seed: u64,
}

impl GramSpec {
    /// `count` jet points with base points uniform in the ball of radius
    /// `radius` and Gaussian fibre arguments.
    pub fn random(d: usize, count: usize, radius: f64, seed: u64, tol_psd: f64) -> Self {
        let mut rng = sampling::rng(seed);
        let points = (0..count)
            .map(|_| JetPoint { z: ball_point(&mut rng, d, radius), zeta: gaussian_vector(&mut rng, d) })
            .collect();
        GramSpec { points, tol_psd, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Psd,
    NotPsd,
    Indeterminate,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Psd => "psd",
            Verdict::NotPsd => "not-psd",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// Outcome of a sampled Gram test. A `NotPsd` verdict is conclusive; `Psd`
/// is evidence at the sampled resolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub verdict: Verdict,
    pub min_eig: f64,
    pub max_eig: f64,
    pub hermitian_defect: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ComplexJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Builds `G[h,k] = K((z_h,ζ_h),(z_k,ζ_k))` and tests it for positivity:
/// PSD iff `min eig ≥ -tol_psd · max(1, max eig)`.
pub fn gram_psd_check(kernel: &dyn DoubledKernel, spec: &GramSpec) -> Result<PsdVerdict> {
    let m = spec.points.len();
    if m == 0 {
        return Err(SymdomError::InvalidParameter("a Gram test needs at least one point".into()));
    }
    let mut g = CMat::zeros(m, m);
    for (h, a) in spec.points.iter().enumerate() {
        for (k, b) in spec.points.iter().enumerate() {
            g[(h, k)] = kernel.eval(&a.z, &b.z, &a.zeta, &b.zeta)?;
        }
    }
    let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let defect = (&g - g.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max) / scale;
    if defect > HERMITIAN_TOL {
        return Err(SymdomError::NonHermitian(defect));
    }
    let herm = (&g + g.adjoint()) * c(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let (mut imin, mut imax) = (0, 0);
    for i in 0..m {
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[imax] {
            imax = i;
        }
    }
    let (min_eig, max_eig) = (eig.eigenvalues[imin], eig.eigenvalues[imax]);
    let psd = min_eig >= -spec.tol_psd * max_eig.max(1.0);
    let witness = (!psd).then(|| vector_to_json(&eig.eigenvectors.column(imin).into_owned()));
    Ok(PsdVerdict {
        verdict: if psd { Verdict::Psd } else { Verdict::NotPsd },
        min_eig,
        max_eig,
        hermitian_defect: defect,
        points: m,
        witness,
        note: None,
    })
}

/// [`gram_psd_check`] with evaluation failures mapped to `Indeterminate`.
pub fn gram_verdict(kernel: &dyn DoubledKernel, spec: &GramSpec) -> PsdVerdict {
    gram_psd_check(kernel, spec).unwrap_or_else(|e| PsdVerdict {
        verdict: Verdict::Indeterminate,
        min_eig: f64::NAN,
        max_eig: f64::NAN,
        hermitian_defect: f64::NAN,
        points: spec.points.len(),
        witness: None,
        note: Some(e.to_string()),
    })
}

/// The scalar kernel `Δ_{z,w}^{-ν}`, ignoring fibre arguments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarKernel {
    pub d: usize,
    pub nu: f64,
}

impl DoubledKernel for ScalarKernel {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, z: &CVec, w: &CVec, _zeta: &CVec, _omega: &CVec) -> Result<Complex64> {
        Ok(crate::linalg::cpow(quasi_determinant(z, w), -self.nu))
    }
}

/// `(b² - (z|w)) K`.
pub struct BoundednessKernel<'a> {
    pub inner: &'a dyn DoubledKernel,
    pub b: f64,
}

impl DoubledKernel for BoundednessKernel<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64> {
        Ok((c(self.b * self.b, 0.0) - pairing(z, w)) * self.inner.eval(z, w, zeta, omega)?)
    }
}

/// Pointwise product of two kernels.
pub struct ProductKernel<'a> {
    pub left: &'a dyn DoubledKernel,
    pub right: &'a dyn DoubledKernel,
}

impl DoubledKernel for ProductKernel<'_> {
    fn dim(&self) -> usize {
        self.left.dim()
    }

    fn eval(&self, z: &CVec, w: &CVec, zeta: &CVec, omega: &CVec) -> Result<Complex64> {
        Ok(self.left.eval(z, w, zeta, omega)? * self.right.eval(z, w, zeta, omega)?)
    }
}

/// Gram test of `(b² - (z|w)) K`; a PSD verdict is evidence that the
/// coordinate multipliers are bounded by `b`.
pub fn boundedness_kernel_check(kernel: &dyn DoubledKernel, b: f64, spec: &GramSpec) -> Result<PsdVerdict> {
    if !(b > 0.0) {
        return Err(SymdomError::InvalidParameter(format!("b must be positive, got {b}")));
    }
    gram_psd_check(&BoundednessKernel { inner: kernel, b }, spec)
}

/// Series of `(b² - (z|w)) (1 - (z|w))^{-ν} = b² + Σ_k coefficients[k] (z|w)^{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCoeffs {
    pub constant: f64,
    /// `(ν)_{k+1}/(k+1)! · (b² - (k+1)/(ν+k))`.
    pub coefficients: Vec<f64>,
    /// `(ν)_k/(k+1)! · (b² - (k+1)/(ν+k))`, a positive multiple of the above.
    pub reduced: Vec<f64>,
    /// `b² - (k+1)/(ν+k)`, which carries the sign.
    pub brackets: Vec<f64>,
}

impl BoundCoeffs {
    /// First index with a negative coefficient.
    pub fn first_negative(&self) -> Option<usize> {
        self.coefficients.iter().position(|&x| x < 0.0)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.constant >= 0.0 && self.first_negative().is_none()
    }
}

pub fn scalar_bound_coeffs(nu: f64, b: f64, n: usize) -> Result<BoundCoeffs> {
    if !(nu > 0.0) {
        return Err(SymdomError::InvalidParameter(format!("ν must be positive, got {nu}")));
    }
    let b2 = b * b;
    let mut coefficients = Vec::with_capacity(n);
    let mut reduced = Vec::with_capacity(n);
    let mut brackets = Vec::with_capacity(n);
    // (ν)_k / (k+1)!, updated in place
    let mut ratio = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let bracket = b2 - (kf + 1.0) / (nu + kf);
        brackets.push(bracket);
        reduced.push(ratio * bracket);
        coefficients.push(ratio * (nu + kf) * bracket);
        ratio *= (nu + kf) / (kf + 2.0);
    }
    Ok(BoundCoeffs { constant: b2, coefficients, reduced, brackets })
}

/// One grid point of a scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub params: Vec<(String, f64)>,
    #[serde(flatten)]
    pub result: PsdVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub seed: u64,
}

impl ScanResult {
    /// CSV with columns `params..., verdict, min_eig, max_eig`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            let mut header: Vec<String> = first.params.iter().map(|(k, _)| k.clone()).collect();
            header.extend(["verdict", "min_eig", "max_eig"].map(String::from));
            w.write_record(&header).map_err(csv_err)?;
        }
        for row in &self.rows {
            let mut rec: Vec<String> = row.params.iter().map(|(_, v)| format!("{v}")).collect();
            rec.push(row.result.verdict.name().to_string());
            rec.push(format!("{}", row.result.min_eig));
            rec.push(format!("{}", row.result.max_eig));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| SymdomError::InvalidParameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Smallest grid value `t` of parameter `key` such that every row with
    /// value `≥ t` is PSD.
    pub fn psd_threshold(&self, key: &str) -> Option<f64> {
        let mut vals: Vec<(f64, Verdict)> = self
            .rows
            .iter()
            .filter_map(|r| r.params.iter().find(|(k, _)| k == key).map(|(_, v)| (*v, r.result.verdict)))
            .collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut threshold = None;
        for (v, verdict) in vals.iter().rev() {
            if *verdict != Verdict::Psd {
                break;
            }
            threshold = Some(*v);
        }
        threshold
    }
}

fn csv_err(e: csv::Error) -> SymdomError {
    SymdomError::InvalidParameter(e.to_string())
}

/// Gram tests of the little kernel `K^{ν,λ}` over a grid of `ν`, with the
/// same sample points at every grid value.
pub fn wallach_scan(d: usize, lambda: usize, grid: &[f64], spec: &GramSpec) -> Result<ScanResult> {
    if grid.is_empty() {
        return Err(SymdomError::InvalidParameter("empty ν grid".into()));
    }
    let rows = grid
        .par_iter()
        .map(|&nu| {
            let params = LittleKernelParams::new(d, nu, lambda)?;
            Ok(ScanRow { params: vec![("nu".into(), nu)], result: gram_verdict(&params, spec) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { rows, seed: spec.seed })
}

/// Evenly spaced grid `min, min+step, ..., ≤ max`.
pub fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) {
        return Err(SymdomError::InvalidParameter(format!("empty grid [{min}, {max}] step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

/// `c' = A(ν*)^{-1} A(ν) c` and whether `c' > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightTransfer {
    pub c_prime: Vec<f64>,
    pub member: bool,
}

pub fn weight_transfer(nu: f64, nu_star: f64, n: usize, c: &[f64], variant: KappaVariant) -> Result<WeightTransfer> {
    if c.len() != n + 1 {
        return Err(SymdomError::DimensionMismatch { expected: n + 1, got: c.len() });
    }
    let a = weight_matrix(nu, n, variant)?;
    let a_star = weight_matrix(nu_star, n, variant)?;
    let rhs = &a * DVector::from_column_slice(c);
    let c_prime = a_star.solve_lower_triangular(&rhs).ok_or(SymdomError::SingularMatrix)?;
    let c_prime: Vec<f64> = c_prime.iter().copied().collect();
    let member = c_prime.iter().all(|&x| x > 0.0);
    Ok(WeightTransfer { c_prime, member })
}

/// Per-degree diagonal of the coordinate-multiplier sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalDegree {
    pub degree: usize,
    /// Range of the diagonal of `Σ_i M_i^* M_i` over monomials of this degree.
    pub mstar_m: (f64, f64),
    /// Range of the diagonal of `Σ_i M_i M_i^*`.
    pub m_mstar: (f64, f64),
    /// `(k+d)/(ν+k)`.
    pub expected_mstar_m: f64,
    /// `k/(ν+k-1)`.
    pub expected_m_mstar: f64,
    /// `(k+1)/(ν+k)`.
    pub stated: f64,
}

/// Builds the multipliers `M_i = z_i·` on polynomials of degree `≤ cap+1`
/// with their adjoints for the monomial norms `I!/(ν)_{|I|}`, and compares
/// the diagonals per degree.
pub fn diagonal_operator_check(d: usize, nu: f64, cap: usize, tol: f64) -> Result<CheckReport> {
    if !(nu > 0.0) {
        return Err(SymdomError::InvalidParameter(format!("ν must be positive, got {nu}")));
    }
    let monomials = MultiIndex::up_to_degree(d, cap + 1);
    let index: std::collections::HashMap<MultiIndex, usize> =
        monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let m = monomials.len();
    let norms: Vec<f64> = monomials.iter().map(|i| i.factorial() / pochhammer(nu, i.degree())).collect();
    let mut sum_mstar_m = DMatrix::<f64>::zeros(m, m);
    let mut sum_m_mstar = DMatrix::<f64>::zeros(m, m);
    for i in 0..d {
        let mut mult = DMatrix::<f64>::zeros(m, m);
        for (col, idx) in monomials.iter().enumerate() {
            if idx.degree() <= cap {
                mult[(index[&idx.add(&MultiIndex::unit(d, i))], col)] = 1.0;
            }
        }
        // M^* = N^{-1} M^T N
        let adj = DMatrix::from_fn(m, m, |r, s| mult[(s, r)] * norms[s] / norms[r]);
        sum_mstar_m += &adj * &mult;
        sum_m_mstar += &mult * &adj;
    }
    let mut degrees = Vec::new();
    let (mut err, mut stated_err, mut off_diag) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..=cap {
        let kf = k as f64;
        let (mut a, mut b) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
        for (pos, idx) in monomials.iter().enumerate() {
            if idx.degree() != k {
                continue;
            }
            let (x, y) = (sum_mstar_m[(pos, pos)], sum_m_mstar[(pos, pos)]);
            a = (a.0.min(x), a.1.max(x));
            b = (b.0.min(y), b.1.max(y));
            for other in 0..m {
                if other != pos && monomials[other].degree() <= cap {
                    off_diag = off_diag.max(sum_mstar_m[(other, pos)].abs());
                }
            }
        }
        let expected = (kf + d as f64) / (nu + kf);
        let expected_mm = if k == 0 { 0.0 } else { kf / (nu + kf - 1.0) };
        let stated = (kf + 1.0) / (nu + kf);
        err = err.max((a.0 - expected).abs()).max((a.1 - expected).abs());
        err = err.max((b.0 - expected_mm).abs()).max((b.1 - expected_mm).abs());
        stated_err = stated_err.max((a.0 - stated).abs()).max((a.1 - stated).abs());
        degrees.push(DiagonalDegree {
            degree: k,
            mstar_m: a,
            m_mstar: b,
            expected_mstar_m: expected,
            expected_m_mstar: expected_mm,
            stated,
        });
    }
    Ok(CheckReport::new(
        "diagonal_operator",
        "diagonal of the coordinate multiplier sums",
        degrees.len(),
        err.max(off_diag),
        tol,
    )
    .param("d", d)
    .param("nu", nu)
    .param("cap", cap)
    .with_extra("stated_form_error", stated_err)
    .with_extra("stated_form_matches", stated_err <= tol)
    .with_extra("degrees", serde_json::to_value(&degrees)?))
}

/// Which operators the commutant must commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Full,
    IdentityOnly,
}

/// Ansatz for the unknown commuting operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ansatz {
    /// Scalar on each degree block.
    BlockScalar,
    /// Arbitrary matrix; degree projections are added to the family.
    Unconstrained,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutantSpec {
    pub samples: usize,
    pub seed: u64,
    pub radius: f64,
    pub family: Family,
    pub ansatz: Ansatz,
    pub variant: KappaVariant,
    /// Relative singular-value threshold for the null space.
    pub null_tol: f64,
}

impl Default for CommutantSpec {
    fn default() -> Self {
        CommutantSpec {
            samples: 10,
            seed: 7,
            radius: 0.8,
            family: Family::Full,
            ansatz: Ansatz::BlockScalar,
            variant: KappaVariant::Proof,
            null_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutantResult {
    pub dimension: usize,
    /// Null-space basis; for the block-scalar ansatz one value per degree.
    pub basis: Vec<Vec<ComplexJson>>,
    pub singular_values: Vec<f64>,
    /// `σ_max / σ_min` over the non-null singular values.
    pub condition: f64,
    pub family_size: usize,
}

/// The operators `(τ̄_{-z^w})^* L^{-1} τ̄_w L (τ̄_z)^* L^{-1} τ̄_{-w^z}`.
pub fn commutant_family(params: &BigKernelParams, beta: &FibreMetric, spec: &CommutantSpec) -> Result<Vec<FibreOperator>> {
    let (d, n) = (params.d, params.n);
    let basis = Arc::new(GradedBasis::new(d, n));
    if spec.family == Family::IdentityOnly {
        return Ok(vec![FibreOperator::identity(basis)]);
    }
    let origin = big_kernel_origin(params, spec.variant)?;
    let diag = origin.operator_diagonal();
    if diag.iter().any(|&x| !(x > 0.0)) {
        return Err(SymdomError::SingularMatrix);
    }
    let l = FibreOperator::block_scalar(basis.clone(), &diag.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
    let l_inv = l.inverse()?;
    let adj = |op: FibreOperator| metric_adjoint(&op, beta);
    let mut rng = sampling::rng(spec.seed);
    let mut out = Vec::with_capacity(spec.samples);
    for _ in 0..spec.samples {
        let z = ball_point(&mut rng, d, spec.radius);
        let w = ball_point(&mut rng, d, spec.radius);
        let zw = quasi_inverse(&z, &w)?;
        let wz = quasi_inverse(&w, &z)?;
        let ops = [
            adj(tau_bar_pi_n(&(-&zw), n)?)?,
            l_inv.clone(),
            tau_bar_pi_n(&w, n)?,
            l.clone(),
            adj(tau_bar_pi_n(&z, n)?)?,
            l_inv.clone(),
            tau_bar_pi_n(&(-&wz), n)?,
        ];
        let mut acc = FibreOperator::identity(basis.clone());
        for op in &ops {
            acc = acc.compose(op);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Dimension of `{P : [P, F] = 0 for all F in the family}` within the ansatz.
pub fn commutant_probe(params: &BigKernelParams, beta: &FibreMetric, spec: &CommutantSpec) -> Result<CommutantResult> {
    let n = params.n;
    let basis = Arc::new(GradedBasis::new(params.d, n));
    let mut family = commutant_family(params, beta, spec)?;
    let m = basis.len();
    let (columns, embed): (usize, Box<dyn Fn(&DVector<Complex64>) -> CMat>) = match spec.ansatz {
        Ansatz::BlockScalar => {
            let b = basis.clone();
            (
                n + 1,
                Box::new(move |v: &DVector<Complex64>| {
                    FibreOperator::block_scalar(b.clone(), v.as_slice()).matrix
                }),
            )
        }
        Ansatz::Unconstrained => {
            for k in 0..=n {
                family.push(FibreOperator::degree_projection(basis.clone(), k));
            }
            (m * m, Box::new(move |v: &DVector<Complex64>| CMat::from_column_slice(m, m, v.as_slice())))
        }
    };
    let rows_per = m * m;
    // zero rows keep the system tall so the SVD returns every right singular vector
    let mut system = CMat::zeros((rows_per * family.len()).max(columns), columns);
    for col in 0..columns {
        let mut e = DVector::<Complex64>::zeros(columns);
        e[col] = c(1.0, 0.0);
        let p = embed(&e);
        for (j, f) in family.iter().enumerate() {
            let comm = &p * &f.matrix - &f.matrix * &p;
            for (r, v) in comm.iter().enumerate() {
                system[(j * rows_per + r, col)] = *v;
            }
        }
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.ok_or(SymdomError::SingularMatrix)?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let threshold = spec.null_tol * smax.max(f64::MIN_POSITIVE);
    let mut basis_out = Vec::new();
    let mut smin_kept = f64::INFINITY;
    for (i, &s) in sv.iter().enumerate() {
        if s <= threshold {
            let row: CVec = v_t.row(i).adjoint();
            let pivot = row.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ZERO);
            let normalized = if pivot == ZERO { row } else { row / pivot };
            basis_out.push(vector_to_json(&normalized));
        } else {
            smin_kept = smin_kept.min(s);
        }
    }
    let mut sorted = sv.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(CommutantResult {
        dimension: basis_out.len(),
        basis: basis_out,
        singular_values: sorted,
        condition: if smin_kept.is_finite() { smax / smin_kept } else { f64::INFINITY },
        family_size: family.len(),
    })
}
