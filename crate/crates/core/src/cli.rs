//! Command-line front end: argument parsing, configuration layering,
//! command dispatch and report output.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ball::Automorphism;
use crate::cauchy::CauchyConfig;
use crate::fibre::{factorization_check, shift_generator, FibreMetric};
use crate::intertwine::{
    check_big_covariance, check_disk_integral, check_intertwiner_kernel, check_pointwise_intertwining,
    intertwiner_coeffs, kappa_matrix, resolve_kappa_variant, BigKernel, BigKernelParams, DiskQuadrature,
    KappaVariant,
};
use crate::kernels::{
    check_little_covariance, check_reproducing, fk_expand, little_kernel, LittleKernelParams, ReproducingSpec,
    SampleSpec,
};
use crate::linalg::CVec;
use crate::positivity::{
    boundedness_kernel_check, commutant_probe, diagonal_operator_check, grid, scalar_bound_coeffs, wallach_scan,
    weight_transfer, Ansatz, CommutantSpec, Family, GramSpec, ScanResult, ScanRow, Verdict, TOL_PSD,
};
use crate::report::CheckReport;
use crate::sampling::{self, ball_point, unitary};
use crate::{Complex64, SymdomError};

#[derive(Parser, Debug)]
#[command(name = "symdom", version, about = "Kernels, intertwiners and positivity checks on the complex unit ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a kernel, coefficient table or matrix.
    Eval {
        #[arg(value_enum)]
        object: EvalObject,
        #[command(flatten)]
        opts: Options,
    },
    /// Run a numerical identity check.
    Check {
        #[arg(value_enum)]
        suite: CheckSuite,
        #[command(flatten)]
        opts: Options,
    },
    /// Scan positivity verdicts over a parameter grid.
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        #[command(flatten)]
        opts: Options,
    },
    /// Probe structural properties.
    Probe {
        #[arg(value_enum)]
        target: ProbeTarget,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalObject {
    LittleKernel,
    BigKernel,
    Intertwiner,
    Kappa,
    Fk,
    BoundCoeffs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSuite {
    Covariance,
    Reproducing,
    Intertwiner,
    Intertwining,
    Factorization,
    Kappa,
    Disk,
    Diagonal,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    Wallach,
    Bounded,
    Weights,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeTarget {
    Commutant,
}

/// Flags shared by all commands. Every flag can also be given in the
/// `--config` file as `key=value` with the flag name as key.
#[derive(Args, Debug, Default, Clone)]
pub struct Options {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Comma-separated weights `c_0,...,c_n`.
    #[arg(long)]
    pub c: Option<String>,
    /// Comma-separated bounds `b`.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "tol-psd")]
    pub tol_psd: Option<f64>,
    #[arg(long)]
    pub cap: Option<usize>,
    /// `theorem`, `proof` or `both`.
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `json` or `csv`.
    #[arg(long)]
    pub format: Option<String>,
    /// Complex vectors as comma lists, e.g. `0.1+0.2i,-0.3`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long = "nu-min", allow_negative_numbers = true)]
    pub nu_min: Option<f64>,
    #[arg(long = "nu-max", allow_negative_numbers = true)]
    pub nu_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long = "nu-star", allow_negative_numbers = true)]
    pub nu_star: Option<f64>,
    /// Number of series coefficients.
    #[arg(long = "N")]
    pub count: Option<usize>,
    /// `little` or `big`.
    #[arg(long)]
    pub space: Option<String>,
    /// `full` or `identity-only`.
    #[arg(long)]
    pub family: Option<String>,
    /// `block-scalar` or `unconstrained`.
    #[arg(long)]
    pub ansatz: Option<String>,
    /// Comma-separated fibre metric weights per degree.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long = "expect-irreducible")]
    pub expect_irreducible: bool,
    #[arg(long)]
    pub quick: bool,
}

impl Options {
    fn supplied(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        macro_rules! put {
            ($key:expr, $field:expr) => {
                if let Some(v) = &$field {
                    out.push(($key, v.to_string()));
                }
            };
        }
        put!("d", self.d);
        put!("nu", self.nu);
        put!("n", self.n);
        put!("lambda", self.lambda);
        put!("c", self.c);
        put!("b", self.b);
        put!("samples", self.samples);
        put!("seed", self.seed);
        put!("radius", self.radius);
        put!("tol", self.tol);
        put!("tol-psd", self.tol_psd);
        put!("cap", self.cap);
        put!("variant", self.variant);
        put!("format", self.format);
        put!("z", self.z);
        put!("w", self.w);
        put!("zeta", self.zeta);
        put!("omega", self.omega);
        put!("nu-min", self.nu_min);
        put!("nu-max", self.nu_max);
        put!("step", self.step);
        put!("nu-star", self.nu_star);
        put!("N", self.count);
        put!("space", self.space);
        put!("family", self.family);
        put!("ansatz", self.ansatz);
        put!("beta", self.beta);
        if self.expect_irreducible {
            out.push(("expect-irreducible", "true".into()));
        }
        if self.quick {
            out.push(("quick", "true".into()));
        }
        out
    }
}

/// Failure of a CLI invocation, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Invalid(String),
    /// Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<SymdomError> for CliError {
    fn from(e: SymdomError) -> Self {
        match e {
            SymdomError::InvalidParameter(_)
            | SymdomError::DimensionMismatch { .. }
            | SymdomError::NotInterior(_)
            | SymdomError::QuasiSingular(_)
            | SymdomError::PochhammerPole { .. }
            | SymdomError::Json(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key=value", no + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Resolved settings (flags over config file over defaults). Every value
/// read is recorded so reports echo the effective configuration.
pub struct RunConfig {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> CliResult<Self> {
        let mut values = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in opts.supplied() {
            values.insert(k.to_string(), v);
        }
        let out = opts.out.clone().or_else(|| values.get("out").map(PathBuf::from));
        Ok(RunConfig { values, used: RefCell::new(BTreeMap::new()), out })
    }

    fn raw(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    fn record(&self, key: &str, value: String) {
        self.used.borrow_mut().insert(key.to_string(), value);
    }

    fn parse<T: FromStr>(&self, key: &str, default: Option<T>) -> CliResult<T>
    where
        T: ToString,
    {
        let value = match self.raw(key) {
            Some(s) => s.parse::<T>().map_err(|_| invalid(format!("cannot parse --{key} {s:?}")))?,
            None => default.ok_or_else(|| invalid(format!("--{key} is required")))?,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn f64(&self, key: &str, default: f64) -> CliResult<f64> {
        let v = self.parse(key, Some(default))?;
        if !f64::is_finite(v) {
            return Err(invalid(format!("--{key} must be finite")));
        }
        Ok(v)
    }

    pub fn f64_required(&self, key: &str) -> CliResult<f64> {
        self.parse::<f64>(key, None)
    }

    pub fn usize(&self, key: &str, default: usize) -> CliResult<usize> {
        self.parse(key, Some(default))
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.parse("seed", Some(7u64))
    }

    pub fn flag(&self, key: &str) -> bool {
        let on = self.raw(key).is_some_and(|v| v == "true" || v == "1");
        if on {
            self.record(key, "true".into());
        }
        on
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        let v = self.raw(key).unwrap_or_else(|| default.to_string());
        self.record(key, v.clone());
        v
    }

    pub fn positive(&self, key: &str, default: f64) -> CliResult<f64> {
        let v = self.f64(key, default)?;
        if !(v > 0.0) {
            return Err(invalid(format!("--{key} must be positive")));
        }
        Ok(v)
    }

    pub fn radius(&self, default: f64) -> CliResult<f64> {
        let r = self.positive("radius", default)?;
        if r >= 1.0 {
            return Err(invalid("--radius must be below 1"));
        }
        Ok(r)
    }

    pub fn list(&self, key: &str, default: Option<&str>) -> CliResult<Vec<f64>> {
        let text = self
            .raw(key)
            .or_else(|| default.map(str::to_string))
            .ok_or_else(|| invalid(format!("--{key} is required")))?;
        self.record(key, text.clone());
        text.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("cannot parse --{key} entry {s:?}"))))
            .collect()
    }

    pub fn vector(&self, key: &str, d: usize) -> CliResult<CVec> {
        let text = self.raw(key).ok_or_else(|| invalid(format!("--{key} is required")))?;
        self.record(key, text.clone());
        let entries = text
            .split(',')
            .map(|s| {
                Complex64::from_str(s.trim()).map_err(|_| invalid(format!("cannot parse --{key} entry {s:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if entries.len() != d {
            return Err(invalid(format!("--{key} has {} entries, expected {d}", entries.len())));
        }
        Ok(CVec::from_vec(entries))
    }

    pub fn variant(&self) -> CliResult<KappaVariant> {
        KappaVariant::from_str(&self.string("variant", "proof")).map_err(CliError::from)
    }

    pub fn echo(&self) -> BTreeMap<String, String> {
        self.used.borrow().clone()
    }
}

/// Deterministic part of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Payload {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckReport>,
    pub values: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub payload: Payload,
    pub wall_time_s: f64,
}

/// Result of running one command.
pub struct Outcome {
    pub payload: Payload,
    pub csv: Option<String>,
    pub exit_code: i32,
}

fn weights(cfg: &RunConfig, n: usize) -> CliResult<Vec<f64>> {
    let default = vec!["1"; n + 1].join(",");
    let c = cfg.list("c", Some(&default))?;
    if c.len() != n + 1 {
        return Err(invalid(format!("--c needs {} entries, got {}", n + 1, c.len())));
    }
    Ok(c)
}

fn eval(object: EvalObject, cfg: &RunConfig) -> CliResult<(Vec<CheckReport>, Value)> {
    let value = match object {
        EvalObject::LittleKernel => {
            let d = cfg.usize("d", 2)?;
            let params = LittleKernelParams::new(d, cfg.f64_required("nu")?, cfg.usize("lambda", 0)?)?;
            let (z, w) = (cfg.vector("z", d)?, cfg.vector("w", d)?);
            let (zeta, omega) = (cfg.vector("zeta", d)?, cfg.vector("omega", d)?);
            let v = little_kernel(&params, &z, &w, &zeta, &omega)?;
            json!({ "value": [v.re, v.im] })
        }
        EvalObject::BigKernel => {
            let d = cfg.usize("d", 1)?;
            let n = cfg.usize("n", 1)?;
            let params = BigKernelParams::new(d, cfg.f64_required("nu")?, n, weights(cfg, n)?)?;
            let kernel = BigKernel::new(params, cfg.usize("cap", 25)?, cfg.positive("tol", 1e-10)?)?;
            let (z, w) = (cfg.vector("z", d)?, cfg.vector("w", d)?);
            let (zeta, omega) = (cfg.vector("zeta", d)?, cfg.vector("omega", d)?);
            let v = kernel.eval_truncated(&z, &w, &zeta, &omega)?;
            json!({ "value": [v.value.re, v.value.im], "tail_estimate": v.tail })
        }
        EvalObject::Intertwiner => {
            let n = cfg.usize("n", 2)?;
            let c = intertwiner_coeffs(cfg.f64_required("nu")?, n, cfg.usize("lambda", 0)?)?;
            let diff: Vec<f64> = c.differential().iter().map(|x| x.re).collect();
            json!({ "mu": c.mu, "differential": diff })
        }
        EvalObject::Kappa => {
            let d = cfg.usize("d", 1)?;
            let n = cfg.usize("n", 1)?;
            let nu = cfg.f64_required("nu")?;
            let which = cfg.string("variant", "both");
            let mut matrices = serde_json::Map::new();
            for v in KappaVariant::ALL {
                if which == "both" || which == v.name() {
                    let k = kappa_matrix(nu, n, v)?;
                    let rows: Vec<Vec<f64>> = (0..=n).map(|i| (0..=n).map(|j| k[(i, j)]).collect()).collect();
                    matrices.insert(v.name().into(), json!(rows));
                }
            }
            if matrices.is_empty() {
                return Err(invalid(format!("unknown --variant {which:?}")));
            }
            let params = BigKernelParams::new(d, nu, n, weights(cfg, n)?)?;
            let res = resolve_kappa_variant(&params, cfg.positive("tol", 1e-10)?)?;
            let selected = res.selected().map(|v| v.name());
            json!({ "kappa": matrices, "resolution": res, "selected": selected })
        }
        EvalObject::Fk => json!({ "coefficients": fk_expand(cfg.f64_required("nu")?, cfg.usize("N", 10)?) }),
        EvalObject::BoundCoeffs => {
            let b = cfg.list("b", Some("1"))?;
            let nu = cfg.f64_required("nu")?;
            let count = cfg.usize("N", 20)?;
            let rows = b
                .iter()
                .map(|&b| {
                    let s = scalar_bound_coeffs(nu, b, count)?;
                    Ok(json!({ "b": b, "series": s, "first_negative": s.first_negative() }))
                })
                .collect::<CliResult<Vec<_>>>()?;
            json!(rows)
        }
    };
    Ok((Vec::new(), value))
}

struct Budget {
    quick: bool,
}

impl Budget {
    fn samples(&self, cfg: &RunConfig, full: usize) -> CliResult<usize> {
        let default = if self.quick { full.div_ceil(4).max(2) } else { full };
        let s = cfg.usize("samples", default)?;
        if s == 0 {
            return Err(invalid("--samples must be positive"));
        }
        Ok(s)
    }
}

fn check_factorization(cfg: &RunConfig, budget: &Budget, tol: f64) -> CliResult<CheckReport> {
    let d = cfg.usize("d", 2)?;
    let n = cfg.usize("n", 2)?;
    let samples = budget.samples(cfg, 10)?;
    let seed = cfg.seed()?;
    let radius = cfg.radius(0.8)?;
    let mut rng = sampling::rng(seed);
    let mut worst = crate::report::MaxError::default();
    for _ in 0..samples {
        let g = Automorphism::new(ball_point(&mut rng, d, radius), unitary(&mut rng, d))?;
        let z = ball_point(&mut rng, d, radius);
        worst.push(factorization_check(&g, &z, n, tol)?.max_error);
    }
    let s = shift_generator(&sampling::gaussian_vector(&mut rng, d), n)?;
    let mut power = s.matrix.clone();
    for _ in 0..n {
        power = &power * &s.matrix;
    }
    let nilpotent = power.iter().all(|v| *v == crate::linalg::ZERO);
    let mut rep = CheckReport::new("factorization", "shift factorization of the cocycle", samples, worst.0, tol)
        .param("d", d)
        .param("n", n)
        .with_extra("shift_nilpotent", nilpotent);
    rep.pass &= nilpotent;
    Ok(rep)
}

fn run_check(suite: CheckSuite, cfg: &RunConfig) -> CliResult<(Vec<CheckReport>, Value)> {
    let budget = Budget { quick: cfg.flag("quick") };
    let tol = cfg.positive("tol", 1e-8)?;
    let reports = match suite {
        CheckSuite::Covariance => {
            let space = cfg.string("space", "little");
            let d = cfg.usize("d", 2)?;
            let nu = cfg.f64("nu", 4.0)?;
            let seed = cfg.seed()?;
            let samples = budget.samples(cfg, 20)?;
            match space.as_str() {
                "little" => {
                    let radius = cfg.radius(0.8)?;
                    let p = LittleKernelParams::new(d, nu, cfg.usize("lambda", 1)?)?;
                    let x = ball_point(&mut sampling::rng(seed ^ 0x5eed), d, radius);
                    vec![check_little_covariance(&p, &x, &SampleSpec { samples, seed, radius }, tol)?]
                }
                "big" => {
                    let radius = cfg.radius(0.3)?;
                    let n = cfg.usize("n", 1)?;
                    let params = BigKernelParams::new(d, nu, n, weights(cfg, n)?)?;
                    let kernel = BigKernel::new(params, cfg.usize("cap", 40)?, tol * 1e-3)?;
                    let x = ball_point(&mut sampling::rng(seed ^ 0x5eed), d, radius);
                    vec![check_big_covariance(&kernel, &x, &SampleSpec { samples, seed, radius }, tol)?]
                }
                other => return Err(invalid(format!("unknown --space {other:?}"))),
            }
        }
        CheckSuite::Reproducing => {
            let p = LittleKernelParams::new(cfg.usize("d", 2)?, cfg.f64("nu", 4.0)?, cfg.usize("lambda", 1)?)?;
            let rs = ReproducingSpec { cap: cfg.usize("cap", 4)?, ..ReproducingSpec::default() };
            let spec = SampleSpec { samples: budget.samples(cfg, 5)?, seed: cfg.seed()?, radius: 0.5 };
            vec![check_reproducing(&p, &rs, &spec, cfg.positive("tol", 1e-9)?)?]
        }
        CheckSuite::Intertwiner => {
            let p = LittleKernelParams::new(cfg.usize("d", 2)?, cfg.f64("nu", 4.0)?, cfg.usize("lambda", 1)?)?;
            let spec = SampleSpec { samples: budget.samples(cfg, 20)?, seed: cfg.seed()?, radius: cfg.radius(0.4)? };
            let cauchy = CauchyConfig { radius: 0.05, nodes: 64 };
            vec![check_intertwiner_kernel(&p, cfg.usize("n", 2)?, &spec, &cauchy, cfg.positive("tol", 1e-9)?)?]
        }
        CheckSuite::Intertwining => {
            let p = LittleKernelParams::new(cfg.usize("d", 2)?, cfg.f64("nu", 3.5)?, cfg.usize("lambda", 1)?)?;
            let spec = SampleSpec { samples: budget.samples(cfg, 10)?, seed: cfg.seed()?, radius: cfg.radius(0.4)? };
            vec![check_pointwise_intertwining(&p, cfg.usize("n", 2)?, &spec, &CauchyConfig::default(), tol)?]
        }
        CheckSuite::Factorization => vec![check_factorization(cfg, &budget, cfg.positive("tol", 1e-9)?)?],
        CheckSuite::Kappa => {
            let d = cfg.usize("d", 1)?;
            let n = cfg.usize("n", 1)?;
            let params = BigKernelParams::new(d, cfg.f64("nu", 2.5)?, n, weights(cfg, n)?)?;
            let ktol = cfg.positive("tol", 1e-10)?;
            let res = resolve_kappa_variant(&params, ktol)?;
            let err = match res.selected() {
                Some(KappaVariant::Theorem) => res.theorem_error,
                Some(KappaVariant::Proof) => res.proof_error,
                None => f64::INFINITY,
            };
            vec![CheckReport::new("kappa_variant", "κ variant selected by the orthonormal-basis oracle", 1, err, ktol)
                .param("d", d)
                .param("n", n)
                .param("nu", params.nu)
                .with_extra("selected", res.selected().map(|v| v.name()))
                .with_extra("resolution", serde_json::to_value(&res)?)]
        }
        CheckSuite::Disk => {
            let spec = SampleSpec { samples: budget.samples(cfg, 10)?, seed: cfg.seed()?, radius: cfg.radius(0.4)? };
            let quad = if budget.quick { DiskQuadrature { radial: 100, angular: 128 } } else { DiskQuadrature::default() };
            vec![check_disk_integral(
                cfg.f64("nu", 6.0)?,
                cfg.usize("n", 2)?,
                cfg.usize("lambda", 1)?,
                &spec,
                &quad,
                cfg.positive("tol", 1e-6)?,
            )?]
        }
        CheckSuite::Diagonal => vec![diagonal_operator_check(
            cfg.usize("d", 1)?,
            cfg.f64("nu", 2.7)?,
            cfg.usize("cap", 8)?,
            cfg.positive("tol", 1e-10)?,
        )?],
        CheckSuite::All => return run_all(cfg, &budget),
    };
    Ok((reports, Value::Null))
}

fn run_all(cfg: &RunConfig, budget: &Budget) -> CliResult<(Vec<CheckReport>, Value)> {
    let seed = cfg.seed()?;
    let s = |full: usize| if budget.quick { full.div_ceil(4).max(2) } else { full };
    let mut out = Vec::new();
    let mut rng = sampling::rng(seed);
    for d in 1..=2 {
        for n in 0..=3 {
            let mut worst = crate::report::MaxError::default();
            for _ in 0..s(10) {
                let g = Automorphism::new(ball_point(&mut rng, d, 0.8), unitary(&mut rng, d))?;
                let z = ball_point(&mut rng, d, 0.8);
                worst.push(factorization_check(&g, &z, n, 1e-9)?.max_error);
            }
            out.push(
                CheckReport::new("factorization", "shift factorization of the cocycle", s(10), worst.0, 1e-9)
                    .param("d", d)
                    .param("n", n),
            );
        }
    }
    let little = LittleKernelParams::new(2, 4.0, 1)?;
    let x = ball_point(&mut rng, 2, 0.8);
    out.push(check_little_covariance(&little, &x, &SampleSpec { samples: s(20), seed, radius: 0.8 }, 1e-8)?);
    let big = BigKernel::new(BigKernelParams::new(1, 4.0, 1, vec![1.0, 1.0])?, 40, 1e-11)?;
    let x = ball_point(&mut rng, 1, 0.3);
    out.push(check_big_covariance(&big, &x, &SampleSpec { samples: s(20), seed, radius: 0.3 }, 1e-8)?);
    for lam in 0..=2 {
        let p = LittleKernelParams::new(2, 4.0, lam)?;
        out.push(check_reproducing(&p, &ReproducingSpec::default(), &SampleSpec { samples: s(4), seed, radius: 0.5 }, 1e-9)?);
    }
    let cauchy = CauchyConfig { radius: 0.05, nodes: 64 };
    for (d, n, lam) in [(1, 2, 0), (2, 2, 1), (2, 3, 0)] {
        let p = LittleKernelParams::new(d, 4.0, lam)?;
        out.push(check_intertwiner_kernel(&p, n, &SampleSpec { samples: s(20), seed, radius: 0.4 }, &cauchy, 1e-9)?);
        out.push(check_pointwise_intertwining(
            &p,
            n,
            &SampleSpec { samples: s(10), seed, radius: 0.4 },
            &CauchyConfig::default(),
            1e-8,
        )?);
    }
    for (d, n, nu) in [(1, 1, 2.5), (2, 2, 4.0), (1, 3, 3.0)] {
        let res = resolve_kappa_variant(&BigKernelParams::new(d, nu, n, vec![1.0; n + 1])?, 1e-10)?;
        let err = res.selected().map_or(f64::INFINITY, |v| match v {
            KappaVariant::Theorem => res.theorem_error,
            KappaVariant::Proof => res.proof_error,
        });
        out.push(
            CheckReport::new("kappa_variant", "κ variant selected by the orthonormal-basis oracle", 1, err, 1e-10)
                .param("d", d)
                .param("n", n)
                .param("nu", nu)
                .with_extra("selected", res.selected().map(|v| v.name())),
        );
    }
    let quad = if budget.quick { DiskQuadrature { radial: 100, angular: 128 } } else { DiskQuadrature::default() };
    out.push(check_disk_integral(6.0, 2, 1, &SampleSpec { samples: s(10), seed, radius: 0.4 }, &quad, 1e-6)?);
    for (d, nu) in [(1, 1.0), (1, 2.7), (2, 3.0)] {
        out.push(diagonal_operator_check(d, nu, 8, 1e-10)?);
    }
    Ok((out, Value::Null))
}

fn scan_rows_value(scan: &ScanResult) -> CliResult<Value> {
    Ok(serde_json::to_value(scan)?)
}

fn run_scan(kind: ScanKind, cfg: &RunConfig) -> CliResult<(Vec<CheckReport>, Value, ScanResult)> {
    let seed = cfg.seed()?;
    let tol_psd = cfg.positive("tol-psd", TOL_PSD)?;
    match kind {
        ScanKind::Wallach => {
            let d = cfg.usize("d", 2)?;
            let lam = cfg.usize("lambda", 0)?;
            let g = grid(cfg.f64("nu-min", -3.0)?, cfg.f64("nu-max", 3.0)?, cfg.positive("step", 0.25)?)?;
            let spec = GramSpec::random(d, cfg.usize("samples", 40)?, cfg.radius(0.8)?, seed, tol_psd);
            let scan = wallach_scan(d, lam, &g, &spec)?;
            let value = json!({
                "psd_threshold": scan.psd_threshold("nu"),
                "rows": scan_rows_value(&scan)?,
            });
            Ok((Vec::new(), value, scan))
        }
        ScanKind::Bounded => {
            let d = cfg.usize("d", 1)?;
            let n = cfg.usize("n", 0)?;
            let nu = cfg.f64_required("nu")?;
            let params = BigKernelParams::new(d, nu, n, weights(cfg, n)?)?;
            let kernel = BigKernel::new(params, cfg.usize("cap", 60)?, cfg.positive("tol", 1e-9)?)?;
            let spec = GramSpec::random(d, cfg.usize("samples", 30)?, cfg.radius(0.6)?, seed, tol_psd);
            let bs = cfg.list("b", Some("1,2,4"))?;
            if bs.is_empty() {
                return Err(invalid("empty --b grid"));
            }
            let rows = bs
                .iter()
                .map(|&b| {
                    let result = boundedness_kernel_check(&kernel, b, &spec)?;
                    Ok(ScanRow { params: vec![("nu".into(), nu), ("b".into(), b)], result })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let scan = ScanResult { rows, seed };
            let bounded = scan.rows.iter().any(|r| r.result.verdict == Verdict::Psd);
            Ok((Vec::new(), json!({ "bounded_for_some_b": bounded, "rows": scan_rows_value(&scan)? }), scan))
        }
        ScanKind::Weights => {
            let n = cfg.usize("n", 1)?;
            let nu = cfg.f64_required("nu")?;
            let nu_star = cfg.f64_required("nu-star")?;
            let c = weights(cfg, n)?;
            let variant = cfg.variant()?;
            let t = weight_transfer(nu, nu_star, n, &c, variant)?;
            let min = t.c_prime.iter().copied().fold(f64::INFINITY, f64::min);
            let row = ScanRow {
                params: vec![("nu".into(), nu), ("nu_star".into(), nu_star)],
                result: crate::positivity::PsdVerdict {
                    verdict: if t.member { Verdict::Psd } else { Verdict::NotPsd },
                    min_eig: min,
                    max_eig: t.c_prime.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    hermitian_defect: 0.0,
                    points: n + 1,
                    witness: None,
                    note: Some("min/max are the extreme entries of c'".into()),
                },
            };
            let scan = ScanResult { rows: vec![row], seed };
            Ok((Vec::new(), json!({ "c_prime": t.c_prime, "member": t.member, "variant": variant.name() }), scan))
        }
    }
}

fn run_probe(cfg: &RunConfig) -> CliResult<(Vec<CheckReport>, Value, bool)> {
    let d = cfg.usize("d", 2)?;
    let n = cfg.usize("n", 2)?;
    let params = BigKernelParams::new(d, cfg.f64("nu", 4.0)?, n, weights(cfg, n)?)?;
    let beta_default = vec!["1"; n + 1].join(",");
    let beta = FibreMetric::new(cfg.list("beta", Some(&beta_default))?)?;
    let family = match cfg.string("family", "full").as_str() {
        "full" => Family::Full,
        "identity-only" => Family::IdentityOnly,
        other => return Err(invalid(format!("unknown --family {other:?}"))),
    };
    let ansatz = match cfg.string("ansatz", "block-scalar").as_str() {
        "block-scalar" => Ansatz::BlockScalar,
        "unconstrained" => Ansatz::Unconstrained,
        other => return Err(invalid(format!("unknown --ansatz {other:?}"))),
    };
    let spec = CommutantSpec {
        samples: cfg.usize("samples", 10)?,
        seed: cfg.seed()?,
        radius: cfg.radius(0.8)?,
        family,
        ansatz,
        variant: cfg.variant()?,
        null_tol: cfg.positive("tol", 1e-9)?,
    };
    let res = commutant_probe(&params, &beta, &spec)?;
    let expect = cfg.flag("expect-irreducible");
    let ok = !expect || res.dimension == 1;
    Ok((Vec::new(), serde_json::to_value(&res)?, ok))
}

/// Runs a parsed command without touching the filesystem.
pub fn execute(command: &Command) -> CliResult<Outcome> {
    let (name, opts) = match command {
        Command::Eval { object, opts } => (format!("eval {}", value_name(object)), opts),
        Command::Check { suite, opts } => (format!("check {}", value_name(suite)), opts),
        Command::Scan { kind, opts } => (format!("scan {}", value_name(kind)), opts),
        Command::Probe { target, opts } => (format!("probe {}", value_name(target)), opts),
    };
    let cfg = RunConfig::resolve(opts)?;
    let format = cfg.string("format", if matches!(command, Command::Scan { .. }) { "csv" } else { "json" });
    if format != "json" && format != "csv" {
        return Err(invalid(format!("unknown --format {format:?}")));
    }
    let mut csv = None;
    let (checks, values, ok) = match command {
        Command::Eval { object, .. } => {
            let (c, v) = eval(*object, &cfg)?;
            (c, v, true)
        }
        Command::Check { suite, .. } => {
            let (c, v) = run_check(*suite, &cfg)?;
            let ok = c.iter().all(|r| r.pass);
            (c, v, ok)
        }
        Command::Scan { kind, .. } => {
            let (c, v, scan) = run_scan(*kind, &cfg)?;
            if format == "csv" {
                csv = Some(scan.to_csv()?);
            }
            (c, v, true)
        }
        Command::Probe { .. } => run_probe(&cfg)?,
    };
    if format == "csv" && csv.is_none() {
        return Err(invalid("--format csv is only available for scans"));
    }
    let payload = Payload { command: name, config: cfg.echo(), checks, values, pass: ok };
    Ok(Outcome { payload, csv, exit_code: if ok { 0 } else { 1 } })
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Sets the global thread pool size from `SYMDOM_THREADS`.
pub fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("SYMDOM_THREADS") {
        let n: usize = v.parse().map_err(|_| invalid(format!("SYMDOM_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    Ok(())
}

fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let start = Instant::now();
    let result = init_threads().and_then(|_| execute(&cli.command));
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("symdom: {}", e.message());
            return e.exit_code();
        }
    };
    let out_path = match &cli.command {
        Command::Eval { opts, .. } | Command::Check { opts, .. } | Command::Scan { opts, .. } | Command::Probe { opts, .. } => {
            match RunConfig::resolve(opts) {
                Ok(cfg) => cfg.out,
                Err(e) => {
                    eprintln!("symdom: {}", e.message());
                    return e.exit_code();
                }
            }
        }
    };
    let report = Report { payload: outcome.payload, wall_time_s: start.elapsed().as_secs_f64() };
    let json_text = serde_json::to_string_pretty(&report).expect("reports serialize");
    let write = |path: &PathBuf, text: &str| -> std::result::Result<(), i32> {
        std::fs::write(path, text).map_err(|e| {
            eprintln!("symdom: cannot write {}: {e}", path.display());
            2
        })
    };
    match (&outcome.csv, &out_path) {
        (Some(csv), Some(path)) => {
            if let Err(code) = write(path, csv) {
                return code;
            }
            emit(&format!("{json_text}\n"));
        }
        (Some(csv), None) => emit(csv),
        (None, Some(path)) => {
            if let Err(code) = write(path, &json_text) {
                return code;
            }
        }
        (None, None) => emit(&format!("{json_text}\n")),
    }
    outcome.exit_code
}
