//! Python bindings for `symdom`.

use clap::Parser;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use symdom::fibre::FibreMetric;
use symdom::intertwine::{self as tw, BigKernelParams, KappaVariant};
use symdom::kernels::{self as kn, DoubledKernel, LittleKernelParams};
use symdom::linalg::CVec;
use symdom::positivity::{self as pos, GramSpec};
use symdom::SymdomError;

fn err(e: SymdomError) -> PyErr {
    match e {
        SymdomError::InvalidParameter(_)
        | SymdomError::DimensionMismatch { .. }
        | SymdomError::NotInterior(_)
        | SymdomError::QuasiSingular(_)
        | SymdomError::PochhammerPole { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn vector(v: Vec<Complex64>) -> CVec {
    CVec::from_vec(v)
}

fn variant(name: &str) -> PyResult<KappaVariant> {
    name.parse().map_err(err)
}

/// Little kernel `K^{ν,λ}` on the ball of `C^d`.
#[pyclass(frozen)]
struct LittleKernel {
    params: LittleKernelParams,
}

#[pymethods]
impl LittleKernel {
    #[new]
    fn new(d: usize, nu: f64, lam: usize) -> PyResult<Self> {
        Ok(LittleKernel { params: LittleKernelParams::new(d, nu, lam).map_err(err)? })
    }

    fn __call__(
        &self,
        z: Vec<Complex64>,
        w: Vec<Complex64>,
        zeta: Vec<Complex64>,
        omega: Vec<Complex64>,
    ) -> PyResult<Complex64> {
        kn::little_kernel(&self.params, &vector(z), &vector(w), &vector(zeta), &vector(omega)).map_err(err)
    }

    #[getter]
    fn genus(&self) -> f64 {
        self.params.genus()
    }

    fn __repr__(&self) -> String {
        format!("LittleKernel(d={}, nu={}, lam={})", self.params.d, self.params.nu, self.params.lambda)
    }
}

/// Big kernel on `P^n`-valued sections, truncated at `cap` degrees.
#[pyclass(frozen)]
struct BigKernel {
    inner: tw::BigKernel,
}

#[pymethods]
impl BigKernel {
    #[new]
    #[pyo3(signature = (d, nu, n, c, cap=40, tol=1e-10))]
    fn new(d: usize, nu: f64, n: usize, c: Vec<f64>, cap: usize, tol: f64) -> PyResult<Self> {
        let params = BigKernelParams::new(d, nu, n, c).map_err(err)?;
        Ok(BigKernel { inner: tw::BigKernel::new(params, cap, tol).map_err(err)? })
    }

    fn __call__(
        &self,
        z: Vec<Complex64>,
        w: Vec<Complex64>,
        zeta: Vec<Complex64>,
        omega: Vec<Complex64>,
    ) -> PyResult<Complex64> {
        self.inner.eval(&vector(z), &vector(w), &vector(zeta), &vector(omega)).map_err(err)
    }

    /// Coefficients `a_ℓ` of the kernel at the origin.
    #[pyo3(signature = (variant="proof"))]
    fn origin_coefficients(&self, variant: &str) -> PyResult<Vec<f64>> {
        Ok(tw::big_kernel_origin(&self.inner.params, self::variant(variant)?).map_err(err)?.a)
    }
}

#[pyfunction]
fn fk_expand(nu: f64, n: usize) -> Vec<f64> {
    kn::fk_expand(nu, n)
}

#[pyfunction]
fn intertwiner_coeffs(nu: f64, n: usize, lam: usize) -> PyResult<Vec<f64>> {
    Ok(tw::intertwiner_coeffs(nu, n, lam).map_err(err)?.mu)
}

#[pyfunction]
#[pyo3(signature = (nu, n, variant="proof"))]
fn kappa_matrix(nu: f64, n: usize, variant: &str) -> PyResult<Vec<Vec<f64>>> {
    let k = tw::kappa_matrix(nu, n, self::variant(variant)?).map_err(err)?;
    Ok((0..=n).map(|i| (0..=n).map(|j| k[(i, j)]).collect()).collect())
}

/// Compares both κ variants against the orthonormal-basis oracle.
#[pyfunction]
fn resolve_kappa_variant<'py>(py: Python<'py>, d: usize, nu: f64, n: usize, c: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let params = BigKernelParams::new(d, nu, n, c).map_err(err)?;
    to_py(py, &tw::resolve_kappa_variant(&params, 1e-10).map_err(err)?)
}

#[pyfunction]
fn scalar_bound_coeffs<'py>(py: Python<'py>, nu: f64, b: f64, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &pos::scalar_bound_coeffs(nu, b, n).map_err(err)?)
}

/// Wallach scan of the little kernel; returns the PSD threshold and the rows.
#[pyfunction]
#[pyo3(signature = (d, lam, nu_min, nu_max, step=0.25, points=40, radius=0.8, seed=7))]
#[allow(clippy::too_many_arguments)]
fn wallach_scan<'py>(
    py: Python<'py>,
    d: usize,
    lam: usize,
    nu_min: f64,
    nu_max: f64,
    step: f64,
    points: usize,
    radius: f64,
    seed: u64,
) -> PyResult<(Option<f64>, Bound<'py, PyAny>)> {
    let grid = pos::grid(nu_min, nu_max, step).map_err(err)?;
    let spec = GramSpec::random(d, points, radius, seed, pos::TOL_PSD);
    let scan = pos::wallach_scan(d, lam, &grid, &spec).map_err(err)?;
    Ok((scan.psd_threshold("nu"), to_py(py, &scan)?))
}

/// Numerical commutant of the big-space operator family.
#[pyfunction]
#[pyo3(signature = (d, nu, n, c, beta=None, samples=10, seed=7, identity_only=false))]
#[allow(clippy::too_many_arguments)]
fn commutant_probe<'py>(
    py: Python<'py>,
    d: usize,
    nu: f64,
    n: usize,
    c: Vec<f64>,
    beta: Option<Vec<f64>>,
    samples: usize,
    seed: u64,
    identity_only: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let params = BigKernelParams::new(d, nu, n, c).map_err(err)?;
    let beta = FibreMetric::new(beta.unwrap_or_else(|| vec![1.0; n + 1])).map_err(err)?;
    let family = if identity_only { pos::Family::IdentityOnly } else { pos::Family::Full };
    let spec = pos::CommutantSpec { samples, seed, family, ..pos::CommutantSpec::default() };
    to_py(py, &pos::commutant_probe(&params, &beta, &spec).map_err(err)?)
}

/// Runs a command-line invocation in process; returns `(exit_code, payload)`.
#[pyfunction]
fn run<'py>(py: Python<'py>, args: Vec<String>) -> PyResult<(i32, Bound<'py, PyAny>)> {
    let argv = std::iter::once("symdom".to_string()).chain(args);
    let cli = symdom::cli::Cli::try_parse_from(argv).map_err(|e| PyValueError::new_err(e.to_string()))?;
    match symdom::cli::execute(&cli.command) {
        Ok(outcome) => Ok((outcome.exit_code, to_py(py, &outcome.payload)?)),
        Err(e) => Ok((e.exit_code(), to_py(py, &e.message())?)),
    }
}

#[pymodule]
fn symdom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LittleKernel>()?;
    m.add_class::<BigKernel>()?;
    m.add_function(wrap_pyfunction!(fk_expand, m)?)?;
    m.add_function(wrap_pyfunction!(intertwiner_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_kappa_variant, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_bound_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(wallach_scan, m)?)?;
    m.add_function(wrap_pyfunction!(commutant_probe, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
