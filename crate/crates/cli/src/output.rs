//! Tables and their CSV / JSON / text renderings.

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, enough to round-trip an f64.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// 15 significant digits in positional notation where that stays short.
pub fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if (-3..15).contains(&e) {
        format!("{:.*}", (14 - e) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => sig17(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Num(v) => sig15(*v),
            other => other.csv(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

/// The result of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub schema: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra top-level JSON members (summaries, verdicts).
    pub extra: Map<String, Value>,
    /// Whether a plain `key value` listing is the default rendering.
    pub scalar: bool,
}

impl Report {
    pub fn table(schema: &'static str, columns: &[&str]) -> Self {
        Self {
            schema,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            extra: Map::new(),
            scalar: false,
        }
    }

    /// A single-row report listed as `key value` lines by default.
    pub fn record(schema: &'static str, fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self {
            schema,
            columns,
            rows: vec![row],
            extra: Map::new(),
            scalar: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Option<Format>, cfg: &RunConfig) -> String {
        match format {
            Some(Format::Csv) => self.to_csv(),
            Some(Format::Json) => self.to_json(cfg),
            None if self.scalar => self.to_text(),
            None => self.to_csv(),
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            for (k, v) in self.columns.iter().zip(row) {
                s.push_str(&format!("{k} {}\n", v.text()));
            }
        }
        s
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn to_json(&self, cfg: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.clone(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("schema".into(), json!(self.schema));
        root.insert(
            "config".into(),
            serde_json::to_value(cfg).expect("config serializes"),
        );
        root.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            root.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json");
        s.push('\n');
        s
    }
}
