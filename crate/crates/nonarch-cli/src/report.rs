//! JSON envelopes shared by every subcommand.

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use nonarch::valuation::{ExtRational, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;

/// Integers that fit in `i64` become JSON numbers, everything else `"a/b"`.
pub fn rat(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(n) = r.to_integer().to_i64() {
            return json!(n);
        }
    }
    json!(r.to_string())
}

pub fn ext(e: &ExtRational) -> Value {
    match e {
        ExtRational::Finite(r) => rat(r),
        ExtRational::Infinity => json!("inf"),
    }
}

pub fn opt_i64(v: Option<i64>) -> Value {
    v.map_or(Value::Null, |v| json!(v))
}

/// Variant path of an error from its `Debug` form, e.g.
/// `Hensel(InsufficientPrecision { .. })` gives `Hensel.InsufficientPrecision`.
pub fn error_code(debug: &str) -> String {
    let mut parts = Vec::new();
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        parts.push(&rest[..end]);
        let tail = &rest[end..];
        match tail.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => break,
        }
    }
    parts.join(".")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub input: Value,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub module: &'static str,
    pub op: &'static str,
}

impl Report {
    pub fn new(module: &'static str, op: &'static str, input: Value, result: Value) -> Report {
        Report { input, result, certificates: Vec::new(), module, op }
    }

    pub fn certify(mut self, kind: &str, holds: bool, detail: Value) -> Report {
        self.certificates.push(json!({ "kind": kind, "holds": holds, "detail": detail }));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("input".into(), self.input.clone());
        out.insert("result".into(), self.result.clone());
        out.insert("certificates".into(), Value::Array(self.certificates.clone()));
        out.insert("provenance".into(), json!({ "module": self.module, "op": self.op }));
        Value::Object(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Parse(String),
    Precondition { module: &'static str, op: &'static str, input: Value, code: String, message: String },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Precondition { .. } => EXIT_PRECONDITION,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        match self {
            Failure::Parse(message) => {
                out.insert("input".into(), Value::Null);
                out.insert("error".into(), json!({ "code": "Parse", "message": message }));
            }
            Failure::Precondition { module, op, input, code, message } => {
                out.insert("input".into(), input.clone());
                out.insert("error".into(), json!({ "code": code, "message": message }));
                out.insert("provenance".into(), json!({ "module": module, "op": op }));
            }
        }
        Value::Object(out)
    }
}

impl From<crate::parse::ParseError> for Failure {
    fn from(e: crate::parse::ParseError) -> Failure {
        Failure::Parse(e.to_string())
    }
}
