//! Tables written as CSV or JSON.
//!
//! CSV headers read `name [unit]`; numbers use scientific notation with nine
//! significant digits. JSON carries full-precision numbers, with non-finite
//! values as strings.

use std::io::Write;

use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    /// A kernel or response value in the resonant region.
    Divergent,
}

impl Cell {
    pub fn text(s: &str) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Divergent => "DIVERGENT".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Number(x) if x.is_finite() => json!(x),
            Cell::Number(x) => json!(format_number(*x)),
            Cell::Text(s) => json!(s),
            Cell::Divergent => json!("DIVERGENT"),
        }
    }
}

/// Nine significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        // Signed zeros print alike.
        "0.00000000e0".into()
    } else if x.is_finite() {
        format!("{x:.8e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: &'static str,
    /// SI unit, `1` for pure numbers and `-` for labels.
    pub unit: &'static str,
}

pub const fn column(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{} [{}]", c.name, c.unit))
            .collect();
        w.write_record(&header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| json!({"name": c.name, "unit": c.unit}))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        json!({"columns": columns, "rows": rows})
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())
                    .map_err(|e| CliError::from(std::io::Error::from(e)))?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::from(std::io::Error::from(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec![column("q", "1/m"), column("region", "-"), column("a", "1/m^5")]);
        t.push(vec![Cell::Number(1.0 / 3.0), Cell::text("IIb"), Cell::Divergent]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "q [1/m],region [-],a [1/m^5]\n3.33333333e-1,IIb,DIVERGENT\n"
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(vec![column("q", "1/m")]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(buf, b"q [1/m]\n");
    }

    #[test]
    fn json_keeps_non_finite_values_as_text() {
        let mut t = Table::new(vec![column("tau", "s")]);
        t.push(vec![Cell::Number(f64::INFINITY)]);
        assert_eq!(t.to_json()["rows"][0][0], json!("inf"));
    }
}
