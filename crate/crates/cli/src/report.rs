//! Deterministic JSON reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use rinehart_core::coalgebra::{InvariantPolynomial, SymCoalgebra};
use rinehart_core::cochain::AltForm;
use rinehart_core::scalar::is_zero_vec;
use rinehart_core::{format_rational, Rational, ValidationReport};

pub const TOOL: &str = "rinehart";

/// The request as resolved from the file and the command line.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RequestEcho {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub act_digest: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub request: RequestEcho,
    pub result: Value,
    /// Internal checks executed for this report, all of which passed.
    pub verification: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn rat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

/// `[{indices, value}]`, nonzero entries in lexicographic order.
pub fn form(f: &AltForm<Rational>) -> Value {
    Value::Array(
        f.entries()
            .map(|(indices, value)| json!({ "indices": indices, "value": vector(value) }))
            .collect(),
    )
}

/// `{weight, terms: [{monomial, coefficient}]}` with nonzero terms only.
pub fn polynomial(phi: &InvariantPolynomial<Rational>, coalg: &SymCoalgebra<Rational>) -> Value {
    let d = coalg.base().dim();
    let basis = coalg.basis(phi.weight());
    let terms: Vec<Value> = basis
        .monomials()
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            let c = &phi.coefficients()[i * d..(i + 1) * d];
            (!is_zero_vec(c)).then(|| json!({ "monomial": m, "coefficient": vector(c) }))
        })
        .collect();
    json!({ "weight": phi.weight(), "terms": terms })
}

pub fn validation(kind: &str, name: &str, report: &ValidationReport) -> Value {
    json!({
        "kind": kind,
        "name": name,
        "valid": report.is_valid(),
        "violations": report.violations,
    })
}
