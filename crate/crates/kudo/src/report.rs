//! Diff-stable rendering of reports: every float is written with 17
//! significant digits, non-finite values become `null`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Compact JSON with fixed-precision floats.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn sig17(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        "null".into()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Two-column `field,value` CSV of the flattened report.
pub fn to_csv<T: Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("reports serialize");
    let mut rows = Vec::new();
    flatten("", &tree, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        Value::Number(n) => {
            let text = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u.to_string(),
                (None, Some(i)) => i.to_string(),
                _ => sig17(n.as_f64().unwrap_or(f64::NAN)),
            };
            out.push((prefix.to_string(), text));
        }
        Value::Null => out.push((prefix.to_string(), "null".into())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

pub fn render<T: Serialize>(value: &T, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(value) + "\n",
        OutputFormat::Csv => to_csv(value),
    }
}

/// A failed inequality or identity, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub suite: String,
    pub case: u64,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`, positive when the check fails.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        x: f64,
        n: u32,
        bad: f64,
        list: Vec<f64>,
    }

    #[test]
    fn fixed_precision() {
        let s = Sample {
            x: 0.1,
            n: 3,
            bad: f64::NAN,
            list: vec![1.0, -2.5e-300],
        };
        assert_eq!(
            to_json(&s),
            r#"{"x":1.0000000000000001e-1,"n":3,"bad":null,"list":[1.0000000000000000e0,-2.5000000000000000e-300]}"#
        );
        let csv = to_csv(&s);
        assert!(csv.starts_with("field,value\nx,1.0000000000000001e-1\nn,3\nbad,null\nlist.0,"));
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 0.549_306_144_334_054_9, 1e-310, 12345.678] {
            let back: f64 = sig17(v).parse().unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn violation_round_trip() {
        let v = ViolationReport {
            violations: vec![Violation {
                suite: "pck".into(),
                case: 4,
                inputs: serde_json::json!({"values": [1.5, 0.5]}),
                lhs: 0.75,
                rhs: 0.5,
                gap: 0.25,
            }],
        };
        let text = to_json(&v);
        let back: ViolationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
