//! JSON and CSV rendering. Every rational is emitted exactly plus a decimal shadow.

use densitylab::{Nat, Rat};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub const SCHEMA: &str = "densitylab/1";

/// Exact `{num, den}` as decimal strings and the nearest `f64`.
pub fn rat(r: &Rat) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string(), "decimal": r.to_f64() })
}

pub fn opt_rat(r: Option<&Rat>) -> Value {
    r.map_or(Value::Null, rat)
}

/// Integers travel as strings so that values past 2^53 survive JSON readers.
pub fn nat(n: &Nat) -> Value {
    Value::String(n.to_string())
}

pub fn point(n: &Nat, v: &Rat) -> Value {
    json!({ "n": nat(n), "value": rat(v) })
}

/// A command's output before the envelope is added.
pub struct Report {
    pub result: Value,
    /// Leading label columns ahead of `n,numerator,denominator,decimal`.
    pub csv_labels: Vec<&'static str>,
    pub csv_rows: Vec<CsvRow>,
}

pub struct CsvRow {
    pub labels: Vec<String>,
    pub n: Nat,
    pub value: Rat,
}

impl CsvRow {
    pub fn plain(n: &Nat, value: &Rat) -> Self {
        CsvRow { labels: Vec::new(), n: n.clone(), value: value.clone() }
    }
}

pub fn decimal(r: &Rat) -> String {
    r.to_f64().map_or_else(|| "NaN".into(), |f| f.to_string())
}

pub fn csv(report: &Report) -> String {
    let mut out = String::new();
    for l in &report.csv_labels {
        out.push_str(l);
        out.push(',');
    }
    out.push_str("n,numerator,denominator,decimal\n");
    for row in &report.csv_rows {
        for l in &row.labels {
            out.push_str(l);
            out.push(',');
        }
        out.push_str(&format!("{},{},{},{}\n", row.n, row.value.numer(), row.value.denom(), decimal(&row.value)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_fields() {
        let v = rat(&densitylab::rat(65812, 131071));
        assert_eq!(v["num"], "65812");
        assert_eq!(v["den"], "131071");
        assert_eq!(v["decimal"].as_f64(), Some(65812.0 / 131071.0));
    }

    #[test]
    fn csv_layout() {
        let r = Report {
            result: Value::Null,
            csv_labels: vec!["item"],
            csv_rows: vec![CsvRow { labels: vec!["x".into()], n: Nat::from(4u32), value: densitylab::rat(3, 4) }],
        };
        assert_eq!(csv(&r), "item,n,numerator,denominator,decimal\nx,4,3,4,0.75\n");
    }
}
