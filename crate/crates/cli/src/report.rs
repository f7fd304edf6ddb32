//! Tabular job reports and their CSV and JSON encodings.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which is enough
//! for every `f64` to parse back bit-exactly. The JSON document carries the
//! table plus metadata: version, config echo, solver path, fitted orders,
//! verdicts and job-specific details. It has no timestamp, so reruns of
//! the same config produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

use crate::config::JobConfig;

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    fn csv(self, out: &mut String) {
        match self {
            Cell::Int(i) => write!(out, "{i}"),
            Cell::Real(x) => write!(out, "{x:.16e}"),
        }
        .expect("writing to a String cannot fail");
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(i) => Value::from(i),
            // Non-finite reals become null, as JSON has no spelling for them.
            Cell::Real(x) => Value::from(x),
        }
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Solver path that produced the numbers, when a single solve did.
    pub solver_path: Option<&'static str>,
    pub orders: Vec<Value>,
    pub verdicts: BTreeMap<&'static str, bool>,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Report {
            columns,
            rows: Vec::new(),
            solver_path: None,
            orders: Vec::new(),
            verdicts: BTreeMap::new(),
            details: Map::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("details are plain data");
        self.details.insert(key.to_string(), value);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self, cfg: &JobConfig) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        doc.insert("kind".into(), Value::from(cfg.kind.as_str()));
        doc.insert("config".into(), serde_json::to_value(cfg).expect("config is plain data"));
        let mut solver = Map::new();
        solver.insert("requested".into(), Value::from(cfg.solver.as_str()));
        solver.insert("path".into(), self.solver_path.map_or(Value::Null, Value::from));
        doc.insert("solver".into(), Value::Object(solver));
        doc.insert("columns".into(), Value::from(self.columns.to_vec()));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("orders".into(), Value::Array(self.orders.clone()));
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, v)| (k.to_string(), Value::from(*v)))
            .collect();
        doc.insert("verdicts".into(), Value::Object(verdicts));
        doc.insert("details".into(), Value::Object(self.details.clone()));
        Value::Object(doc)
    }

    pub fn to_json(&self, cfg: &JobConfig) -> String {
        let mut out = to_json_string(&self.to_json_value(cfg));
        out.push('\n');
        out
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    pub fn write_json(&self, cfg: &JobConfig, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_json(cfg))
    }
}

/// Pretty JSON whose reals use 17 significant digits.
pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::default());
    value.serialize(&mut ser).expect("serializing a Value into memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Pretty-printing formatter with fixed-precision scientific reals.
#[derive(Default)]
struct SciFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn sample() -> Report {
        let mut r = Report::new(&["k", "eigenvalue", "residual"]);
        for (k, x) in [0.0, 9.869604401089358, 1.0 / 3.0, 5e-324, -1.7976931348623157e308].into_iter().enumerate() {
            r.push_row(vec![k.into(), x.into(), (x * 1e-17).into()]);
        }
        r.verdicts.insert("holds", true);
        r
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let csv = sample().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,eigenvalue,residual"));
        assert_eq!(lines.next(), Some("0,0.0000000000000000e0,0.0000000000000000e0"));
        assert_eq!(lines.next().unwrap().split(',').nth(1), Some("9.8696044010893580e0"));
        for line in csv.lines().skip(1) {
            let x: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(sample().rows.iter().any(|row| row[1] == Cell::Real(x)));
        }
    }

    #[test]
    fn json_reals_round_trip_bit_exactly() {
        let cfg = parse_config("[problem]\nkind = \"drift\"\nphi = \"x\"\nn = 10\nnum_eigs = 5\n").unwrap();
        let report = sample();
        let text = report.to_json(&cfg);
        let back: Value = serde_json::from_str(&text).unwrap();
        for (row, obj) in report.rows.iter().zip(back["rows"].as_array().unwrap()) {
            for (cell, name) in row.iter().zip(report.columns) {
                match *cell {
                    Cell::Int(i) => assert_eq!(obj[*name].as_u64(), Some(i)),
                    Cell::Real(x) => assert_eq!(obj[*name].as_f64().unwrap().to_bits(), x.to_bits()),
                }
            }
        }
        assert_eq!(back["config"]["tol"].as_f64(), Some(1e-8));
        assert_eq!(back["verdicts"]["holds"], Value::Bool(true));
    }

    #[test]
    fn non_finite_reals_become_null() {
        let mut r = Report::new(&["x"]);
        r.push_row(vec![f64::INFINITY.into()]);
        let cfg = parse_config("[problem]\nkind = \"prop2\"\nn = 10\nnum_eigs = 2\n").unwrap();
        let back: Value = serde_json::from_str(&r.to_json(&cfg)).unwrap();
        assert_eq!(back["rows"][0]["x"], Value::Null);
    }
}
