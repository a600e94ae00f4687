//! Deterministic JSON report documents.
//!
//! Every document has the shape
//!
//! ```json
//! { "schema_version": "1.0", "command": "...", "inputs": {...},
//!   "outputs": {...}, "checks": [{"name": "...", "pass": true, "residual": 0.0}] }
//! ```
//!
//! Floats are rounded to 15 significant digits before serialization so that
//! reruns produce byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1.0";

/// Rounds to 15 significant digits and folds `-0.0` into `0.0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if !r.is_finite() {
        // rounding up past f64::MAX
        return x;
    }
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest representation that round-trips the 15-digit rounding of `x`.
pub fn format_float(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() {
        serde_json::to_string(&r).expect("finite float serializes")
    } else {
        r.to_string()
    }
}

/// Rounds every non-integer number in a JSON tree in place.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// One named pass/fail check with the residual that decided it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    /// Passes iff `residual <= tol`. Non-finite residuals fail and are
    /// recorded as `f64::MAX`.
    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        let finite = residual.is_finite();
        Check {
            name: name.into(),
            pass: finite && residual <= tol,
            residual: if finite { residual } else { f64::MAX },
        }
    }

    /// A boolean check; the residual is 0 on success and 1 on failure.
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, residual: if pass { 0.0 } else { 1.0 } }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, inputs: Value, outputs: Value) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.into(),
            inputs,
            outputs,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Pretty-printed, rounded JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_value(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }
}

/// JSON Schema describing [`ReportDocument`].
pub fn schema() -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "cloneforge report",
        "type": "object",
        "required": ["schema_version", "command", "inputs", "outputs", "checks"],
        "additionalProperties": false,
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "command": {"type": "string"},
            "inputs": {"type": "object"},
            "outputs": {"type": "object"},
            "checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "pass", "residual"],
                    "additionalProperties": false,
                    "properties": {
                        "name": {"type": "string"},
                        "pass": {"type": "boolean"},
                        "residual": {"type": "number"}
                    }
                }
            }
        }
    })
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn expect_keys(map: &Map<String, Value>, keys: &[&str], what: &str) -> Result<()> {
    for k in keys {
        if !map.contains_key(*k) {
            return Err(invalid(format!("{what} is missing '{k}'")));
        }
    }
    if let Some(extra) = map.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(invalid(format!("{what} has unexpected key '{extra}'")));
    }
    Ok(())
}

/// Checks a parsed document against [`schema`].
pub fn validate_document(v: &Value) -> Result<()> {
    let map = v.as_object().ok_or_else(|| invalid("document is not an object"))?;
    expect_keys(map, &["schema_version", "command", "inputs", "outputs", "checks"], "document")?;
    if map["schema_version"] != SCHEMA_VERSION {
        return Err(invalid("unknown schema_version"));
    }
    if !map["command"].is_string() {
        return Err(invalid("command is not a string"));
    }
    for key in ["inputs", "outputs"] {
        if !map[key].is_object() {
            return Err(invalid(format!("{key} is not an object")));
        }
    }
    let checks = map["checks"].as_array().ok_or_else(|| invalid("checks is not an array"))?;
    for c in checks {
        let c = c.as_object().ok_or_else(|| invalid("check is not an object"))?;
        expect_keys(c, &["name", "pass", "residual"], "check")?;
        if !c["name"].is_string() || !c["pass"].is_boolean() || !c["residual"].is_number() {
            return Err(invalid("check fields have the wrong types"));
        }
    }
    Ok(())
}
