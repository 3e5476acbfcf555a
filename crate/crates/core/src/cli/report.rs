//! Deterministic report rendering.

use serde::Serialize;
use serde_json::{Map, Value};

/// Significant digits kept for every float in a report.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Rows for CSV output, with a header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Two numeric columns.
    pub fn pairs(header: [&str; 2], pairs: &[(f64, f64)]) -> Self {
        let mut t = Self::new(&header);
        for &(a, b) in pairs {
            t.push(vec![a.into(), b.into()]);
        }
        t
    }
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub results: Value,
    pub table: Option<Table>,
    pub warnings: Vec<String>,
}

fn cell(v: &Value) -> String {
    match round_value(v.clone()) {
        Value::String(s) => s,
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        Value::Array(items) => out.push((prefix.to_string(), items.iter().map(cell).collect::<Vec<_>>().join(" "))),
        other => out.push((prefix.to_string(), cell(other))),
    }
}

impl Report {
    pub fn new(command: &str, args: &[String], inputs_digest: &str, results: impl Serialize) -> Self {
        Self {
            command: command.to_string(),
            args: args.to_vec(),
            inputs_digest: inputs_digest.to_string(),
            seed: None,
            results: serde_json::to_value(results).expect("results serialize"),
            table: None,
            warnings: Vec::new(),
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// Pretty JSON with sorted keys and rounded floats, newline terminated.
    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.clone()));
        map.insert("args".into(), self.args.clone().into());
        map.insert("inputs_digest".into(), Value::String(self.inputs_digest.clone()));
        if let Some(seed) = self.seed {
            map.insert("seed".into(), seed.into());
        }
        map.insert("results".into(), round_value(self.results.clone()));
        map.insert("warnings".into(), self.warnings.clone().into());
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
        s.push('\n');
        s
    }

    /// The command's table if it has one, otherwise key,value rows of the
    /// flattened results.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.header).expect("write to memory");
                for row in &t.rows {
                    w.write_record(row.iter().map(cell)).expect("write to memory");
                }
            }
            None => {
                let mut rows = Vec::new();
                flatten("", &self.results, &mut rows);
                w.write_record(["key", "value"]).expect("write to memory");
                for (k, v) in rows {
                    w.write_record([k, v]).expect("write to memory");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.20579166666666667), 0.205791666667);
        assert_eq!(round_sig(171.0 / 172.0), 0.994186046512);
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(round_sig(1e-300), 1e-300);
    }

    #[test]
    fn json_keys_sorted_and_csv_flat() {
        let r = Report::new("eval", &["x".into()], "abc", json!({"z": 1.0 / 3.0, "a": [1, 2], "m": {"k": "v"}}));
        let j = r.to_json();
        assert!(j.find("\"a\"").unwrap() < j.find("\"z\"").unwrap());
        assert!(j.contains("0.333333333333"));
        assert_eq!(r.to_csv(), "key,value\na,1 2\nm.k,v\nz,0.333333333333\n");
    }
}
