//! Command output and its three renderings.
//!
//! Numbers always carry 9 significant digits: fixed notation for decimal
//! exponents in `[-5, 9)`, scientific otherwise. Output is a pure function
//! of the report, so identical runs give identical bytes.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub fields: Vec<(&'static str, Value)>,
    pub table: Option<Table>,
}

impl Report {
    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            writeln!(out, "{k:<width$}  {}", plain(v)).unwrap();
        }
        if let Some(t) = &self.table {
            if !self.fields.is_empty() {
                out.push('\n');
            }
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(plain).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap())
                .collect();
            let line = |items: Vec<&str>| {
                items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
            };
            writeln!(out, "{}", line(t.columns.clone())).unwrap();
            for r in &cells {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
            }
        }
        out
    }

    /// The table when there is one, otherwise the fields as a single row.
    fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(t) => {
                writeln!(out, "{}", t.columns.join(",")).unwrap();
                for r in &t.rows {
                    writeln!(out, "{}", r.iter().map(csv_cell).collect::<Vec<_>>().join(",")).unwrap();
                }
            }
            None => {
                let keys: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
                writeln!(out, "{}", keys.join(",")).unwrap();
                let vals: Vec<String> = self.fields.iter().map(|(_, v)| csv_cell(v)).collect();
                writeln!(out, "{}", vals.join(",")).unwrap();
            }
        }
        out
    }

    fn to_json(&self) -> String {
        let mut members: Vec<String> =
            self.fields.iter().map(|(k, v)| format!("  {}: {}", json_str(k), json_value(v))).collect();
        if let Some(t) = &self.table {
            let cols = t.columns.iter().map(|c| json_str(c)).collect::<Vec<_>>().join(", ");
            let rows = t
                .rows
                .iter()
                .map(|r| format!("      [{}]", r.iter().map(json_value).collect::<Vec<_>>().join(", ")))
                .collect::<Vec<_>>()
                .join(",\n");
            members.push(format!("  \"table\": {{\n    \"columns\": [{cols}],\n    \"rows\": [\n{rows}\n    ]\n  }}"));
        }
        format!("{{\n{}\n}}\n", members.join(",\n"))
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..9).contains(&exp) {
        format!("{x:.*}", (8 - exp) as usize)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Num(x) => format_number(*x),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        _ => plain(v),
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_value(v: &Value) -> String {
    match v {
        Value::Num(x) if !x.is_finite() => "null".into(),
        Value::Text(s) => json_str(s),
        _ => plain(v),
    }
}
