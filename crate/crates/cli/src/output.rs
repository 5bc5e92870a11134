//! Tabular output rendered as CSV or JSON with deterministic formatting.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Machine-size integer: a JSON number.
    Int(i128),
    /// Arbitrary-size integer: a decimal string in JSON.
    Big(String),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn big(v: impl ToString) -> Self {
        Cell::Big(v.to_string())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(v) | Cell::Text(v) => v.clone(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(small) => Value::from(small),
                Err(_) => Value::from(v.to_string()),
            },
            Cell::Big(v) | Cell::Text(v) => Value::from(v.as_str()),
            Cell::Real(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
        }
    }
}

macro_rules! int_cells {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cells!(u32, u64, usize, i32, i64);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(Vec::new());
                out.write_record(&self.headers)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::csv))?;
                }
                Ok(String::from_utf8(out.into_inner()?)?)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut text = serde_json::to_string_pretty(&rows)?;
                text.push('\n');
                Ok(text)
            }
        }
    }
}

/// A real with 9 significant digits, trailing zeros removed; positional
/// notation for exponents in `[-5, 9)`, scientific otherwise.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // Rust's exponent formatting rounds correctly; reuse its digits.
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut out = String::new();
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        write!(out, "{v:.decimals$}").unwrap();
        trim_zeros(&mut out);
    } else {
        out.push_str(mantissa);
        trim_zeros(&mut out);
        write!(out, "e{exp}").unwrap();
    }
    out
}

fn trim_zeros(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}
