//! Tables with typed columns, written as CSV or JSON and read back.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("header mismatch: expected {expected:?}, found {found:?}")]
    Header { expected: Vec<String>, found: Vec<String> },
    #[error("row {row}, column `{column}`: cannot parse `{value}`")]
    Cell { row: usize, column: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Int,
    Num,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
}

impl Column {
    pub fn new(name: &str, kind: Kind) -> Self {
        Column { name: name.to_string(), kind }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

/// `x` with 9 significant digits, `%g` style: fixed notation for moderate
/// exponents, trailing zeros removed.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn parse_num(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }

    pub fn to_csv(&self) -> Result<String, TableError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|cell| match cell {
                Cell::Int(i) => i.to_string(),
                Cell::Num(x) => format_num(*x),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| TableError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str, columns: &[Column]) -> Result<Table, TableError> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let found: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let expected: Vec<String> = columns.iter().map(|c| c.name.clone()).collect();
        if found != expected {
            return Err(TableError::Header { expected, found });
        }
        let mut table = Table::new(columns.to_vec());
        for (i, record) in r.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(columns.len());
            for (col, raw) in columns.iter().zip(record.iter()) {
                let bad = || TableError::Cell {
                    row: i,
                    column: col.name.clone(),
                    value: raw.to_string(),
                };
                row.push(match (col.kind, raw) {
                    (_, "") => Cell::Empty,
                    (Kind::Int, s) => Cell::Int(s.parse().map_err(|_| bad())?),
                    (Kind::Num, s) => Cell::Num(parse_num(s).ok_or_else(bad)?),
                    (Kind::Text, s) => Cell::Text(s.to_string()),
                });
            }
            table.push(row);
        }
        Ok(table)
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| {
                        let v = match cell {
                            Cell::Int(i) => Value::from(*i),
                            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Empty => Value::Null,
                        };
                        (c.name.clone(), v)
                    })
                    .collect::<serde_json::Map<_, _>>();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        let mut s = serde_json::to_string_pretty(&self.to_json_value())?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Table, TableError> {
        #[derive(Deserialize)]
        struct Doc {
            columns: Vec<Column>,
            rows: Vec<serde_json::Map<String, Value>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let mut table = Table::new(doc.columns.clone());
        for (i, obj) in doc.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(doc.columns.len());
            for col in &doc.columns {
                let v = obj.get(&col.name).unwrap_or(&Value::Null);
                let bad = || TableError::Cell {
                    row: i,
                    column: col.name.clone(),
                    value: v.to_string(),
                };
                row.push(match (col.kind, v) {
                    (_, Value::Null) => Cell::Empty,
                    (Kind::Int, v) => Cell::Int(v.as_i64().ok_or_else(bad)?),
                    (Kind::Num, v) => Cell::Num(v.as_f64().ok_or_else(bad)?),
                    (Kind::Text, v) => Cell::Text(v.as_str().ok_or_else(bad)?.to_string()),
                });
            }
            table.push(row);
        }
        Ok(table)
    }

    /// The table as it reads back from CSV: numbers rounded to 9 significant digits.
    pub fn rounded(&self) -> Table {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Cell::Num(x) => Cell::Num(parse_num(&format_num(*x)).expect("formatted number parses")),
                        other => other.clone(),
                    })
                    .collect()
            })
            .collect();
        Table { columns: self.columns.clone(), rows }
    }
}

/// Equality that treats two NaN cells as equal.
pub fn same_cells(a: &Table, b: &Table) -> bool {
    a.columns == b.columns
        && a.rows.len() == b.rows.len()
        && a.rows.iter().zip(&b.rows).all(|(x, y)| {
            x.len() == y.len()
                && x.iter().zip(y).all(|(u, v)| match (u, v) {
                    (Cell::Num(p), Cell::Num(q)) => p == q || (p.is_nan() && q.is_nan()),
                    _ => u == v,
                })
        })
}
