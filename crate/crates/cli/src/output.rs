use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use dirac_hardy::VerificationReport;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::I(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_owned())
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::F(x) => fmt17(*x),
            Cell::I(x) => x.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::I(x) => json!(x),
            Cell::S(s) => json!(s),
            Cell::B(b) => json!(b),
        }
    }
}

/// Seventeen significant digits, `%.17g` style, never locale dependent.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        // signed zero prints as plain zero
        return "0.0000000000000000"
        .into();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| ((*k).to_owned(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Everything one command produces.
pub struct Outcome {
    pub command: &'static str,
    pub config: BTreeMap<String, Value>,
    pub table: Table,
    /// Replaces the table rows in JSON output when set.
    pub data: Option<Value>,
    pub report: VerificationReport,
    pub default_format: Format,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a BTreeMap<String, Value>,
    data: Value,
    report: &'a VerificationReport,
}

impl Outcome {
    pub fn new(command: &'static str, table: Table) -> Self {
        Self {
            command,
            config: BTreeMap::new(),
            table,
            data: None,
            report: VerificationReport::new(command),
            default_format: Format::Csv,
        }
    }

    pub fn config(mut self, key: &str, value: impl Serialize) -> Self {
        self.config
            .insert(key.to_owned(), serde_json::to_value(value).expect("plain config value"));
        self
    }

    pub fn to_json(&self) -> String {
        let env = Envelope {
            command: self.command,
            config: &self.config,
            data: self.data.clone().unwrap_or_else(|| self.table.to_json()),
            report: &self.report,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("envelope is serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes `<command>.<csv|json>` and `<command>.report.json` into `dir`.
    pub fn write_files(&self, dir: &Path, format: Format) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        fs::write(dir.join(format!("{}.{ext}", self.command)), self.render(format))?;
        fs::write(dir.join(format!("{}.report.json", self.command)), self.to_json())
    }
}
