//! Rendering of command results. Floats in CSV use 17 significant digits.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A value in the summary block.
#[derive(Clone, Debug, PartialEq)]
pub enum SummaryValue {
    Number(f64),
    Text(String),
}

impl SummaryValue {
    fn render(&self) -> String {
        match self {
            SummaryValue::Number(x) => fmt_f64(*x),
            SummaryValue::Text(t) => t.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            SummaryValue::Number(x) => json!(x),
            SummaryValue::Text(t) => json!(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Written after the rows as `# key = value` lines.
    pub summary: Vec<(String, SummaryValue)>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (key, value) in &self.summary {
            out.push_str(&format!("# {key} = {}\n", value.render()));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let summary: BTreeMap<&str, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.as_str(), v.to_json()))
            .collect();
        json!({
            "columns": self.columns,
            "rows": self.rows,
            "summary": summary,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Table(Table),
    Report(Value),
}

impl Payload {
    /// Tables default to CSV, reports to JSON. Reports have no CSV form.
    pub fn render(&self, format: Option<Format>) -> CliResult<String> {
        match (self, format) {
            (Payload::Table(t), None | Some(Format::Csv)) => Ok(t.to_csv()),
            (Payload::Table(t), Some(Format::Json)) => pretty(&t.to_json()),
            (Payload::Report(v), None | Some(Format::Json)) => pretty(v),
            (Payload::Report(_), Some(Format::Csv)) => {
                Err(CliError::validation("this command only produces JSON"))
            }
        }
    }
}

fn pretty(v: &Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
