use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::cli::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => i64::try_from(*v).map_or_else(|_| Value::String(v.to_string()), Value::from),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => Value::String(float_text(*v)),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "+inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

/// One command's result: a header of scalar facts plus a table.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub alpha: String,
    pub alpha_value: f64,
    pub summary: Vec<(&'static str, Cell)>,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Set when a check carried by the command did not hold.
    pub check_failure: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, alpha: String, alpha_value: f64, headers: Vec<&'static str>) -> Self {
        Report { command, alpha, alpha_value, summary: Vec::new(), headers, rows: Vec::new(), check_failure: None }
    }

    pub fn fact(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }
}

/// Run parameters echoed into every JSON document.
#[derive(Debug, Clone, Copy)]
pub struct Provenance {
    pub precision_bits: usize,
    pub seed: u64,
    pub tol: f64,
}

fn to_json(report: &Report, prov: Provenance) -> Value {
    let summary: Map<String, Value> = report.summary.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| Value::Object(report.headers.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect()))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": report.command,
        "alpha": report.alpha,
        "alpha_value": report.alpha_value,
        "precision_bits": prov.precision_bits,
        "seed": prov.seed,
        "tol": prov.tol,
        "summary": summary,
        "rows": rows,
    })
}

fn write_csv<W: Write>(report: &Report, w: W) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(&report.headers)?;
    for r in &report.rows {
        wtr.write_record(r.iter().map(Cell::csv))?;
    }
    wtr.flush()?;
    Ok(())
}

fn render<W: Write>(report: &Report, format: Format, prov: Provenance, mut w: W) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(report, &mut w).map_err(io::Error::other)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &to_json(report, prov))?;
            writeln!(w)?;
        }
    }
    w.flush()
}

/// Writes the report; in CSV mode the summary goes to stderr as `key: value`.
pub fn emit(report: &Report, format: Format, prov: Provenance, out: Option<&Path>) -> Result<(), CliError> {
    if format == Format::Csv {
        let mut err = io::stderr().lock();
        for (k, v) in &report.summary {
            let _ = writeln!(err, "{k}: {}", v.csv());
        }
    }
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            render(report, format, prov, io::BufWriter::new(file)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => match render(report, format, prov, io::stdout().lock()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.259_828_913_794_410_2, -3e-300, 6.02e23] {
            let s = float_text(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(float_text(f64::INFINITY), "+inf");
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("t", "1".into(), 1.0, vec!["x", "ok"]);
        r.row(vec![0.5.into(), true.into()]);
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,ok\n5.0000000000000000e-1,true\n");
    }

    #[test]
    fn json_envelope() {
        let mut r = Report::new("t", "1/2".into(), 0.5, vec!["v"]);
        r.fact("k", f64::INFINITY);
        r.row(vec![Cell::Int(3)]);
        let v = to_json(&r, Provenance { precision_bits: 128, seed: 7, tol: 1e-10 });
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["alpha"], "1/2");
        assert_eq!(v["seed"], 7);
        assert_eq!(v["precision_bits"], 128);
        assert_eq!(v["summary"]["k"], "+inf");
        assert_eq!(v["rows"][0]["v"], 3);
    }
}
