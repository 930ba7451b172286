use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

/// One emitted record. `inputs` holds the flag values exactly as given (plus
/// defaults that affect the result), so a report can be replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub version: String,
    pub seed: u64,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, outputs: Value, seed: u64, elapsed_ms: u64) -> Self {
        Report {
            command: command.into(),
            inputs,
            outputs,
            version: VERSION.into(),
            seed,
            timing: Timing { elapsed_ms },
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Command-line arguments that reproduce this report.
    pub fn replay_args(&self) -> Vec<String> {
        let mut args = vec![self.command.clone()];
        for (k, v) in &self.inputs {
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        args.push("--seed".into());
        args.push(self.seed.to_string());
        args
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} (linpoly {}, seed {}, {} ms)", self.command, self.version, self.seed, self.timing.elapsed_ms);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "  {k}: {v}");
        }
        let _ = writeln!(s, "  --");
        pretty_value(&mut s, &self.outputs, 1);
        s
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(t) => Some(t.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn pretty_value(s: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(t) => {
                        let _ = writeln!(s, "{pad}{k}: {t}");
                    }
                    None => {
                        let _ = writeln!(s, "{pad}{k}:");
                        pretty_value(s, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(t) => {
                        let _ = writeln!(s, "{pad}- {t}");
                    }
                    None => {
                        let _ = writeln!(s, "{pad}-");
                        pretty_value(s, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(s, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let mut inputs = BTreeMap::new();
        inputs.insert("field".to_string(), "GF(2)".to_string());
        inputs.insert("lin".to_string(), "x^4 + x".to_string());
        let r = Report::new("evalmap", inputs, json!({"injective": false, "kernel": ["x1^2 + x1*x2 + x2^2"]}), 3, 12);
        let back: Report = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.replay_args(), ["evalmap", "--field", "GF(2)", "--lin", "x^4 + x", "--seed", "3"]);
        assert!(r.to_pretty().contains("kernel: [x1^2 + x1*x2 + x2^2]"));
    }
}
