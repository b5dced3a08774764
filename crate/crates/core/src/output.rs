//! Text output shared by the CLI: whitespace-separated tables with `#`
//! metadata headers, and line-delimited JSON records.
//!
//! Table numbers are written with 17 significant digits, which is enough for
//! [`read_table`] to reconstruct every `f64` exactly. Formatting does not
//! depend on the locale.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Ordered `key=value` pairs describing a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Output format for samples and tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Records,
}

/// A block of rows with named columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub meta: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(meta: Metadata, columns: &[&str]) -> Self {
        Table {
            meta,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_header(out, &self.meta, &self.columns)?;
        for row in &self.rows {
            write_row(out, row)?;
        }
        Ok(())
    }

    /// One JSON object for the metadata, then one object per row keyed by
    /// column name.
    pub fn write_records<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_meta_record(out, &self.meta)?;
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.clone(), serde_json::json!(v)))
                .collect();
            writeln!(out, "{}", Value::Object(obj))?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, out: &mut W, format: Format) -> io::Result<()> {
        match format {
            Format::Table => self.write_text(out),
            Format::Records => self.write_records(out),
        }
    }
}

pub fn write_header<W: Write, S: AsRef<str>>(
    out: &mut W,
    meta: &Metadata,
    columns: &[S],
) -> io::Result<()> {
    for (k, v) in &meta.0 {
        writeln!(out, "# {k}={v}")?;
    }
    let cols: Vec<&str> = columns.iter().map(AsRef::as_ref).collect();
    writeln!(out, "# columns: {}", cols.join(" "))
}

pub fn write_row<W: Write>(out: &mut W, row: &[f64]) -> io::Result<()> {
    let mut first = true;
    for &v in row {
        if !first {
            out.write_all(b" ")?;
        }
        first = false;
        write!(out, "{v:.16e}")?;
    }
    out.write_all(b"\n")
}

pub fn write_meta_record<W: Write>(out: &mut W, meta: &Metadata) -> io::Result<()> {
    let meta: Map<String, Value> = meta
        .0
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    writeln!(out, "{}", serde_json::json!({ "meta": meta }))
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line: line + 1,
        msg: msg.into(),
    }
}

/// Parses every table block in `text`. Blocks are separated by blank lines.
pub fn read_tables(text: &str) -> Result<Vec<Table>, ParseError> {
    let mut tables = Vec::new();
    let mut current: Option<Table> = None;
    let mut in_header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            if let Some(t) = current.take() {
                tables.push(t);
            }
            in_header = false;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if !in_header {
                if let Some(t) = current.take() {
                    tables.push(t);
                }
                current = Some(Table::default());
                in_header = true;
            }
            let table = current.as_mut().expect("header opened a table");
            let rest = rest.trim();
            if let Some(cols) = rest.strip_prefix("columns:") {
                table.columns = cols.split_whitespace().map(String::from).collect();
            } else if let Some((k, v)) = rest.split_once('=') {
                table.meta.push(k, v);
            }
            continue;
        }
        in_header = false;
        let table = current.get_or_insert_with(Table::default);
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| malformed(i, format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if !table.columns.is_empty() && row.len() != table.columns.len() {
            return Err(malformed(
                i,
                format!(
                    "expected {} columns, found {}",
                    table.columns.len(),
                    row.len()
                ),
            ));
        }
        table.rows.push(row);
    }
    if let Some(t) = current {
        tables.push(t);
    }
    Ok(tables)
}

/// Parses a single-block table.
pub fn read_table(text: &str) -> Result<Table, ParseError> {
    let mut tables = read_tables(text)?;
    match tables.len() {
        1 => Ok(tables.remove(0)),
        n => Err(malformed(0, format!("expected one table, found {n}"))),
    }
}

/// A metadata record and the records that follow it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordBlock {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<Map<String, Value>>,
}

/// Parses line-delimited records. Every `{"meta": ...}` line opens a block.
pub fn read_record_blocks(text: &str) -> Result<Vec<RecordBlock>, ParseError> {
    let mut blocks: Vec<RecordBlock> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut obj = match serde_json::from_str::<Value>(line) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(malformed(i, "record is not an object")),
            Err(e) => return Err(malformed(i, e.to_string())),
        };
        if let Some(meta) = obj.remove("meta") {
            let meta = meta
                .as_object()
                .ok_or_else(|| malformed(i, "\"meta\" must be an object"))?
                .iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
                .collect();
            blocks.push(RecordBlock {
                meta,
                rows: Vec::new(),
            });
        } else {
            blocks
                .last_mut()
                .ok_or_else(|| malformed(i, "record before any metadata"))?
                .rows
                .push(obj);
        }
    }
    Ok(blocks)
}

/// Parses a single block of records.
pub fn read_records(text: &str) -> Result<RecordBlock, ParseError> {
    let mut blocks = read_record_blocks(text)?;
    match blocks.len() {
        1 => Ok(blocks.remove(0)),
        n => Err(malformed(
            0,
            format!("expected one record block, found {n}"),
        )),
    }
}
