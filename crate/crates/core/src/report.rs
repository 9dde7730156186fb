//! Machine-readable check records.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Result of one numerical identity check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    /// The identity being verified, in words.
    pub anchor: String,
    pub params: BTreeMap<String, Value>,
    pub samples: usize,
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl CheckReport {
    pub fn new(name: &str, anchor: &str, samples: usize, max_error: f64, tol: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            params: BTreeMap::new(),
            samples,
            max_error,
            tol,
            pass: max_error <= tol,
            extra: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

/// Running maximum of errors, treating NaN as failure.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxError(pub f64);

impl MaxError {
    pub fn push(&mut self, e: f64) {
        if e.is_nan() {
            self.0 = f64::INFINITY;
        } else {
            self.0 = self.0.max(e);
        }
    }
}
