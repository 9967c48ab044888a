use std::io::{self, Write};

use serde_json::{Map, Number, Value};

use crate::config::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    /// A half-integer, printed exactly.
    Weight(f64),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Float(x) if x.is_nan() => "NaN".into(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Weight(m) => format!("{m}"),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Float(x) | Cell::Weight(x) => Number::from_f64(x).map_or(Value::Null, Value::Number),
            Cell::Flag(b) => Value::Bool(b),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["m2", "x", "allowed"]);
        t.rows.push(vec![Cell::Weight(-2.5), Cell::Float(0.1), Cell::Flag(true)]);
        t.rows.push(vec![Cell::Weight(3.0), Cell::Float(f64::NAN), Cell::Flag(false)]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "m2,x,allowed\n-2.5,1.0000000000000001e-1,1\n3,NaN,0\n");
    }

    #[test]
    fn json_uses_null_for_nan() {
        let mut t = Table::new(&["x"]);
        t.rows.push(vec![Cell::Float(f64::NAN)]);
        let mut buf = Vec::new();
        t.write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["x"], Value::Null);
    }
}
