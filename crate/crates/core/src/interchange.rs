//! JSON interchange for complex vectors, matrices and polynomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, CVec};
use crate::poly::{CPolynomial, MultiIndex};
use crate::{Result, SymdomError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

pub fn vector_to_json(v: &CVec) -> Vec<ComplexJson> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn vector_from_json(v: &[ComplexJson]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&z| z.into()))
}

/// Row-major list of entries.
pub fn matrix_to_json(m: &CMat) -> Vec<Vec<ComplexJson>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<ComplexJson>]) -> Result<CMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(SymdomError::InvalidParameter("ragged matrix".into()));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| rows[i][j].into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

impl From<&CPolynomial> for PolynomialJson {
    fn from(p: &CPolynomial) -> Self {
        PolynomialJson {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(i, c)| TermJson { index: i.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialJson> for CPolynomial {
    type Error = SymdomError;

    fn try_from(p: &PolynomialJson) -> Result<Self> {
        CPolynomial::from_terms(
            p.dim,
            p.terms
                .iter()
                .map(|t| (MultiIndex(t.index.clone()), Complex64::new(t.re, t.im))),
        )
    }
}

pub fn polynomial_to_string(p: &CPolynomial) -> String {
    serde_json::to_string(&PolynomialJson::from(p)).expect("polynomial serializes")
}

pub fn polynomial_from_str(s: &str) -> Result<CPolynomial> {
    let pj: PolynomialJson = serde_json::from_str(s)?;
    CPolynomial::try_from(&pj)
}
