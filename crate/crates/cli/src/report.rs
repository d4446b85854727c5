use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;

/// Keys that legitimately differ between runs and are skipped by the golden comparison.
const VOLATILE_KEYS: [&str; 2] = ["wall_time_s", "golden"];

#[derive(Debug)]
pub struct Report {
    command: String,
    inputs: Value,
    results: Vec<Value>,
    constants: Option<Value>,
    max_residual: Option<f64>,
    pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        Report { command: command.into(), inputs, results: Vec::new(), constants: None, max_residual: None, pass: true }
    }

    pub fn push(&mut self, result: Value) {
        self.results.push(result);
    }

    /// Records a residual; the run fails if it exceeds `tol · max(1, scale)`.
    pub fn residual(&mut self, residual: f64, scale: f64, tol: f64) -> bool {
        self.max_residual = Some(self.max_residual.map_or(residual, |m| m.max(residual)));
        let ok = residual <= tol * scale.max(1.0);
        self.pass &= ok;
        ok
    }

    pub fn require(&mut self, ok: bool) {
        self.pass &= ok;
    }

    pub fn constants(&mut self, constants: Value) {
        self.constants = Some(constants);
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn to_value(&self, cfg: &RunConfig, wall_time: Option<f64>) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("inputs".into(), self.inputs.clone());
        out.insert("seed".into(), json!(cfg.seed));
        out.insert("tolerance".into(), json!(cfg.tolerance));
        out.insert("results".into(), Value::Array(self.results.clone()));
        out.insert("max_residual".into(), json!(self.max_residual));
        out.insert("pass".into(), json!(self.pass));
        if let Some(c) = &self.constants {
            out.insert("constants".into(), c.clone());
        }
        if let Some(t) = wall_time {
            out.insert("wall_time_s".into(), json!(t));
        }
        Value::Object(out)
    }
}

pub fn c64_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Parses `4+3i`, `2-i`, `6`, `-1.5i`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let t = text.trim().replace(' ', "");
    Complex64::from_str(&t).map_err(|_| CliError::Parse(format!("not a complex number: {text:?}")))
}

pub fn parse_complex_list(items: &[String]) -> Result<Vec<Complex64>, CliError> {
    items.iter().map(|s| parse_complex(s)).collect()
}

/// Paths where `actual` drifts from `golden` beyond `tol · max(1, |golden|)`.
pub fn golden_drift(actual: &Value, golden: &Value, tol: f64) -> Vec<String> {
    let mut drift = Vec::new();
    compare(actual, golden, tol, "$", &mut drift);
    drift
}

fn compare(a: &Value, g: &Value, tol: f64, path: &str, drift: &mut Vec<String>) {
    match (a, g) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            if !((x - y).abs() <= tol * y.abs().max(1.0)) {
                drift.push(format!("{path}: {x:e} vs {y:e}"));
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                drift.push(format!("{path}: length {} vs {}", x.len(), y.len()));
                return;
            }
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                compare(u, v, tol, &format!("{path}[{i}]"), drift);
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            for (key, v) in y {
                if VOLATILE_KEYS.contains(&key.as_str()) {
                    continue;
                }
                match x.get(key) {
                    Some(u) => compare(u, v, tol, &format!("{path}.{key}"), drift),
                    None => drift.push(format!("{path}.{key}: missing")),
                }
            }
            for key in x.keys().filter(|k| !y.contains_key(*k) && !VOLATILE_KEYS.contains(&k.as_str())) {
                drift.push(format!("{path}.{key}: not in golden"));
            }
        }
        _ if a == g => {}
        _ => drift.push(format!("{path}: {a} vs {g}")),
    }
}

/// One `path<TAB>value` line per leaf.
pub fn render_table(v: &Value) -> String {
    let mut lines = Vec::new();
    flatten(v, String::new(), &mut lines);
    lines.join("\n") + "\n"
}

fn flatten(v: &Value, prefix: String, lines: &mut Vec<String>) {
    let join = |p: &str, k: &str| if p.is_empty() { k.to_string() } else { format!("{p}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(x, join(&prefix, k), lines);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) && !is_complex_pair(v) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(x, format!("{prefix}[{i}]"), lines);
            }
        }
        _ => lines.push(format!("{prefix}\t{v}")),
    }
}

fn is_complex_pair(v: &Value) -> bool {
    matches!(v, Value::Array(xs) if xs.len() == 2 && xs.iter().all(Value::is_number))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("4+3i").unwrap(), Complex64::new(4.0, 3.0));
        assert_eq!(parse_complex("2-i").unwrap(), Complex64::new(2.0, -1.0));
        assert_eq!(parse_complex("6").unwrap(), Complex64::new(6.0, 0.0));
        assert_eq!(parse_complex("-1.5i").unwrap(), Complex64::new(0.0, -1.5));
        assert!(parse_complex("4+").is_err());
    }

    #[test]
    fn drift_respects_tolerance() {
        let golden = json!({"x": 1.0, "v": [1.0, 2.0], "s": "a", "wall_time_s": 3.0});
        assert!(golden_drift(&json!({"x": 1.0 + 1e-12, "v": [1.0, 2.0], "s": "a"}), &golden, 1e-9).is_empty());
        let d = golden_drift(&json!({"x": 1.1, "v": [1.0], "s": "b"}), &golden, 1e-9);
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn table_lines() {
        let t = render_table(&json!({"a": {"b": 1}, "z": [0.5, 1.0]}));
        assert_eq!(t, "a.b\t1\nz\t[0.5,1.0]\n");
    }
}
