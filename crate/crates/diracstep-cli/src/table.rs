//! Row-oriented result tables and their CSV and JSON encodings.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Shortest round-trip representation, switching to exponent form outside
/// [1e-4, 1e15) so tiny values do not expand into long zero runs.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if x == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(*x).map(Value::Number).unwrap_or_else(|| Value::String(format_number(*x))),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, header: Value) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("header".into(), header);
        root.insert("columns".into(), Value::Array(self.columns.iter().map(|c| Value::String((*c).into())).collect()));
        root.insert("rows".into(), Value::Array(rows));
        Value::Object(root)
    }

    pub fn write_json<W: Write>(&self, header: Value, mut out: W) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut out, &self.to_json(header))?;
        out.write_all(b"\n")?;
        Ok(())
    }
}
