//! JSON schemas for algebras, elements, functions and metrics, and the report
//! envelope emitted by every command.
//!
//! Complex numbers are `[re, im]` pairs throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::gallery;
use crate::linalg::C64;
use crate::lipschitz::FiniteMetric;
use crate::vvfa::{AValuedFunction, FiniteSpace, ScalarFunction};

pub type Pair = [f64; 2];

/// Version string stamped into reports.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

pub fn pairs(zs: &[C64]) -> Vec<Pair> {
    zs.iter().map(|&z| pair(z)).collect()
}

fn semantic(message: impl Into<String>) -> Error {
    Error::ParseError { line: 0, message: message.into() }
}

fn syntax(e: serde_json::Error) -> Error {
    Error::ParseError { line: e.line(), message: e.to_string() }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    dim: usize,
    basis: Vec<String>,
    unit: Vec<Pair>,
    structure: Vec<(usize, usize, usize, f64, f64)>,
}

/// Parses `gallery:NAME` or an algebra document, then validates it.
pub fn parse_algebra(text: &str) -> Result<Algebra> {
    if let Some(name) = text.trim().strip_prefix("gallery:") {
        return gallery::gallery(name.trim());
    }
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(syntax)?;
    let n = doc.dim;
    if n == 0 {
        return Err(semantic("dim must be positive"));
    }
    if doc.basis.len() != n || doc.unit.len() != n {
        return Err(semantic(format!(
            "dim {n} but {} basis names and {} unit coefficients",
            doc.basis.len(),
            doc.unit.len()
        )));
    }
    let mut structure = vec![C64::new(0.0, 0.0); n * n * n];
    let mut seen = vec![false; n * n * n];
    for (i, j, k, re, im) in doc.structure {
        if i >= n || j >= n || k >= n {
            return Err(semantic(format!("structure index ({i},{j},{k}) out of range for dim {n}")));
        }
        let at = (i * n + j) * n + k;
        if seen[at] {
            return Err(semantic(format!("structure entry ({i},{j},{k}) given twice")));
        }
        seen[at] = true;
        structure[at] = C64::new(re, im);
    }
    Algebra::new(doc.basis, structure, doc.unit.into_iter().map(complex).collect())
}

/// Serializes an algebra; entries whose bits are zero are omitted.
pub fn algebra_to_json(alg: &Algebra) -> Value {
    let n = alg.dim();
    let mut structure = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let z = alg.structure(i, j, k);
                if z.re.to_bits() != 0 || z.im.to_bits() != 0 {
                    structure.push((i, j, k, z.re, z.im));
                }
            }
        }
    }
    let doc = AlgebraDoc { dim: n, basis: alg.basis_names().to_vec(), unit: pairs(alg.unit_coeffs()), structure };
    serde_json::to_value(doc).expect("plain data")
}

pub fn serialize_algebra(alg: &Algebra) -> String {
    serde_json::to_string_pretty(&algebra_to_json(alg)).expect("plain data")
}

/// Parses `[[re, im], ...]` as an element of `alg`.
pub fn parse_element(alg: &Algebra, text: &str) -> Result<Element> {
    let coeffs: Vec<Pair> = serde_json::from_str(text).map_err(syntax)?;
    if coeffs.len() != alg.dim() {
        return Err(semantic(format!("element has {} coefficients, algebra has dim {}", coeffs.len(), alg.dim())));
    }
    alg.element(coeffs.into_iter().map(complex).collect())
}

/// Parses `[[[re, im], ...], ...]` as a tuple of elements.
pub fn parse_tuple(alg: &Algebra, text: &str) -> Result<Vec<Element>> {
    let items: Vec<Vec<Pair>> = serde_json::from_str(text).map_err(syntax)?;
    if items.is_empty() {
        return Err(semantic("tuple must have at least one element"));
    }
    items
        .into_iter()
        .enumerate()
        .map(|(i, coeffs)| {
            if coeffs.len() != alg.dim() {
                return Err(semantic(format!(
                    "tuple entry {i} has {} coefficients, algebra has dim {}",
                    coeffs.len(),
                    alg.dim()
                )));
            }
            alg.element(coeffs.into_iter().map(complex).collect())
        })
        .collect()
}

fn space_from(points: Vec<String>) -> Result<FiniteSpace> {
    FiniteSpace::new(points).map_err(|e| semantic(e.to_string()))
}

fn values_in_order<T>(space: &FiniteSpace, mut values: BTreeMap<String, T>) -> Result<Vec<T>> {
    let out = space
        .points()
        .iter()
        .map(|p| values.remove(p).ok_or_else(|| semantic(format!("no value for point {p:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = values.keys().next() {
        return Err(semantic(format!("value for unknown point {extra:?}")));
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    space: Vec<String>,
    /// Informational label of the target algebra.
    #[serde(default)]
    algebra: String,
    values: BTreeMap<String, Vec<Pair>>,
}

pub fn parse_function(alg: &Algebra, text: &str) -> Result<AValuedFunction> {
    let doc: FunctionDoc = serde_json::from_str(text).map_err(syntax)?;
    let space = space_from(doc.space)?;
    let values = values_in_order(&space, doc.values)?
        .into_iter()
        .map(|coeffs| {
            if coeffs.len() != alg.dim() {
                return Err(semantic(format!(
                    "value has {} coefficients, algebra has dim {}",
                    coeffs.len(),
                    alg.dim()
                )));
            }
            alg.element(coeffs.into_iter().map(complex).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    AValuedFunction::new(space, alg, values)
}

pub fn function_to_json(f: &AValuedFunction, label: &str) -> Value {
    let values = f.space().points().iter().zip(f.values()).map(|(p, v)| (p.clone(), pairs(v.coeffs()))).collect();
    serde_json::to_value(FunctionDoc { space: f.space().points().to_vec(), algebra: label.to_string(), values })
        .expect("plain data")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaDoc {
    space: Vec<String>,
    values: BTreeMap<String, Pair>,
}

pub fn parse_lambda(text: &str) -> Result<ScalarFunction> {
    let doc: LambdaDoc = serde_json::from_str(text).map_err(syntax)?;
    let space = space_from(doc.space)?;
    let values = values_in_order(&space, doc.values)?.into_iter().map(complex).collect();
    ScalarFunction::new(space, values)
}

/// `{"p": [re, im], ...}`.
pub fn scalar_function_to_json(lambda: &ScalarFunction) -> Value {
    let map: Map<String, Value> = lambda
        .space()
        .points()
        .iter()
        .zip(lambda.values())
        .map(|(p, &z)| (p.clone(), serde_json::json!(pair(z))))
        .collect();
    Value::Object(map)
}

pub fn element_to_json(a: &Element) -> Value {
    serde_json::json!(pairs(a.coeffs()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricDoc {
    space: Vec<String>,
    d: Vec<Vec<f64>>,
}

pub fn parse_metric(text: &str) -> Result<FiniteMetric> {
    let doc: MetricDoc = serde_json::from_str(text).map_err(syntax)?;
    FiniteMetric::new(space_from(doc.space)?, doc.d)
}

pub fn metric_to_json(m: &FiniteMetric) -> Value {
    serde_json::to_value(MetricDoc { space: m.space().points().to_vec(), d: m.distances().to_vec() })
        .expect("plain data")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Envelope of a command's result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(flatten)]
    pub payload: Map<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub seed: u64,
    pub tool_version: String,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            status: Status::Pass,
            payload: Map::new(),
            residuals: BTreeMap::new(),
            seed,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        self.payload.insert(key.to_string(), serde_json::to_value(value).expect("serializable payload"));
    }

    pub fn residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// Human-readable rendering: one `key: value` line per field.
    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\nstatus: {}\n", self.command, status_name(self.status));
        for (k, v) in &self.payload {
            out.push_str(&format!("{k}: {}\n", compact(v)));
        }
        for (k, v) in &self.residuals {
            out.push_str(&format!("residual {k}: {v:e}\n"));
        }
        out.push_str(&format!("seed: {}\ntool_version: {}\n", self.seed, self.tool_version));
        out
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
