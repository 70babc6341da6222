//! Rendering of command results as JSON, CSV, or aligned text.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Rows for CSV and aligned output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Result of one subcommand.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report { json, table: None }
    }

    pub fn with_table(json: Value, table: Table) -> Self {
        Report {
            json,
            table: Some(table),
        }
    }
}

/// `x` with 17 significant digits, positional when the exponent is modest.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt17(x)).expect("valid number"))
    } else {
        Value::String(x.to_string())
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `(path, value)` pairs of the leaves of `v`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(a) => out.push((
            prefix.to_string(),
            a.iter().map(scalar_text).collect::<Vec<_>>().join(";"),
        )),
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn key_value_table(json: &Value) -> Table {
    let mut pairs = Vec::new();
    flatten("", json, &mut pairs);
    let mut t = Table::new(&["key", "value"]);
    for (k, v) in pairs {
        t.push(vec![Value::String(k), Value::String(v)]);
    }
    t
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let table = report
                .table
                .clone()
                .unwrap_or_else(|| key_value_table(&report.json));
            let mut s = table
                .headers
                .iter()
                .map(|h| csv_field(h))
                .collect::<Vec<_>>()
                .join(",");
            s.push('\n');
            for row in &table.rows {
                s.push_str(
                    &row.iter()
                        .map(|c| csv_field(&scalar_text(c)))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                s.push('\n');
            }
            s
        }
        Format::Pretty => {
            let table = report
                .table
                .clone()
                .unwrap_or_else(|| key_value_table(&report.json));
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(scalar_text).collect())
                .collect();
            let widths: Vec<usize> = (0..table.headers.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain(std::iter::once(table.headers[j].chars().count()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut s = String::new();
            let line = |s: &mut String, row: &[String]| {
                let parts: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                let _ = writeln!(s, "{}", parts.join("  ").trim_end());
            };
            line(&mut s, &table.headers);
            line(
                &mut s,
                &widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>(),
            );
            for row in &cells {
                line(&mut s, row);
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(-2.5e-9), "-2.5000000000000001e-9");
        assert_eq!(fmt17(123.0), "123.00000000000000");
        for x in [0.1, 1.0 / 3.0, -7.25e-300, 6.02e23, 1e16] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_fallback_flattens() {
        let r = Report::json(serde_json::json!({"a": {"b": 1}, "c": [1, 2]}));
        assert_eq!(render(&r, Format::Csv), "key,value\na.b,1\nc,1;2\n");
    }
}
