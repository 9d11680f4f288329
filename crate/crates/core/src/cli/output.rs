//! Rendering of command results as aligned text, CSV or JSON.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigUint),
    Real(f64),
    Text(String),
    Bool(bool),
    /// Explicit marker for a value that does not exist, such as the fidelity
    /// of an empty block.
    Undefined,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<BigUint> for Cell {
    fn from(x: BigUint) -> Self {
        Cell::Int(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x.into())
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x.into())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Undefined, Cell::Real)
    }
}

fn non_finite(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl Cell {
    /// 17 significant digits, enough to round-trip any `f64`.
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Real(x) => non_finite(*x).to_string(),
            other => other.plain(),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Real(x) if !x.is_finite() => non_finite(*x).to_string(),
            Cell::Real(x) if *x == 0.0 || (1e-4..1e6).contains(&x.abs()) => format!("{x:.10}"),
            Cell::Real(x) => format!("{x:.6e}"),
            other => other.plain(),
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Real(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Undefined => "undefined".to_string(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Int(x) => x.to_u64().map_or_else(|| Value::String(x.to_string()), Value::from),
            Cell::Real(x) => serde_json::Number::from_f64(*x)
                .map_or_else(|| Value::String(non_finite(*x).to_string()), Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Undefined => Value::Null,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain([self.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.columns);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out += &line(&rule);
        for r in &cells {
            out += &line(r);
        }
        out
    }

    fn csv(&self, trailer: Option<&[Cell]>) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::invalid(format!("CSV output failed: {e}"));
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in self.rows.iter().map(Vec::as_slice).chain(trailer) {
            writer
                .write_record(row.iter().map(Cell::csv))
                .map_err(csv_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::invalid(format!("CSV output failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(format!("CSV output failed: {e}")))
    }
}

/// What a command produced. CSV carries only the main table (and trailer
/// row); text adds the notes and secondary tables; JSON carries the main
/// table as `rows` next to `json_extra`.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub notes: Vec<String>,
    pub table: Table,
    /// Extra final row for text and CSV, such as a truncation marker.
    pub trailer: Option<Vec<Cell>>,
    pub secondary: Vec<(String, Table)>,
    pub footer: Vec<String>,
    pub json_extra: Map<String, Value>,
}

impl Output {
    pub fn new(table: Table) -> Self {
        Output {
            table,
            ..Output::default()
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.table.csv(self.trailer.as_deref()),
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("rows".into(), self.table.json_rows());
                obj.extend(self.json_extra.clone());
                let mut text = serde_json::to_string_pretty(&Value::Object(obj))
                    .map_err(|e| Error::invalid(format!("JSON output failed: {e}")))?;
                text.push('\n');
                Ok(text)
            }
            Format::Table => {
                let mut out = String::new();
                for note in &self.notes {
                    out += note;
                    out.push('\n');
                }
                if !self.notes.is_empty() {
                    out.push('\n');
                }
                let mut main = self.table.clone();
                main.rows.extend(self.trailer.clone());
                out += &main.text();
                for (title, table) in &self.secondary {
                    out += &format!("\n{title}\n");
                    out += &table.text();
                }
                if !self.footer.is_empty() {
                    out.push('\n');
                }
                for line in &self.footer {
                    out += line;
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}
