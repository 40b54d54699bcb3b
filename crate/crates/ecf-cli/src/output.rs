//! Row tables and their CSV / JSON encodings.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub type Row = Map<String, Value>;

/// Rows sharing one column layout, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub command: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Table {
            command: command.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema_version".into(), SCHEMA_VERSION.into());
        top.insert("command".into(), self.command.clone().into());
        top.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        Value::Object(top)
    }

    /// Header from the union of keys in first-seen order; missing cells are empty.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut header: Vec<&str> = Vec::new();
        for r in &self.rows {
            for k in r.keys() {
                if !header.contains(&k.as_str()) {
                    header.push(k);
                }
            }
        }
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&header)?;
        for r in &self.rows {
            out.write_record(header.iter().map(|k| cell(r.get(*k))))?;
        }
        out.flush()
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json())?;
                w.write_all(b"\n")
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(p) => self.write(format, io::BufWriter::new(File::create(p)?)),
            None => self.write(format, io::stdout().lock()),
        }
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

/// Build a row from `(key, value)` pairs.
#[macro_export]
macro_rules! row {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut r = $crate::output::Row::new();
        $( r.insert(($k).to_string(), serde_json::Value::from($v)); )*
        r
    }};
}
