//! CSV reading with line-located errors, canonical CSV writing and the
//! generic long-format table used by every exporter.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Record reader that checks the header row and tracks source lines.
pub(crate) struct CsvRows {
    path: PathBuf,
    reader: csv::Reader<Box<dyn Read>>,
    record: csv::StringRecord,
    line: u64,
}

pub(crate) struct Record<'a> {
    rec: &'a csv::StringRecord,
}

impl Record<'_> {
    pub fn field(&self, i: usize) -> &str {
        self.rec.get(i).unwrap_or("").trim()
    }
}

pub(crate) fn open_csv(path: &Path, header: &[&str]) -> Result<CsvRows> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    CsvRows::from_reader(path, Box::new(io::BufReader::new(file)), header)
}

impl CsvRows {
    pub fn from_reader<P: Into<PathBuf>, R: Read + 'static>(path: P, reader: R, header: &[&str]) -> Result<Self> {
        let path = path.into();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(Box::new(reader) as Box<dyn Read>);
        let found = reader.headers().map_err(|e| csv_error(&path, e))?.clone();
        // A completely empty file stands for a table with no rows.
        if !(found.is_empty() || (found.len() == 1 && found[0].trim().is_empty())) {
            let got: Vec<&str> = found.iter().map(str::trim).collect();
            if got != header {
                return Err(Error::Parse {
                    path,
                    line: 1,
                    message: format!("expected header {:?}, found {:?}", header.join(","), got.join(",")),
                });
            }
        }
        Ok(Self { path, reader, record: csv::StringRecord::new(), line: 1 })
    }

    pub fn next_record(&mut self) -> Result<Option<Record<'_>>> {
        let more = self.reader.read_record(&mut self.record).map_err(|e| csv_error(&self.path, e))?;
        if !more {
            return Ok(None);
        }
        self.line = self.record.position().map_or(self.line + 1, |p| p.line());
        Ok(Some(Record { rec: &self.record }))
    }

    pub fn line(&self) -> u64 {
        self.line
    }

    /// Parse error at the current record.
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { path: self.path.clone(), line: self.line, message: message.into() }
    }

    pub fn parse<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let raw = self.record.get(i).unwrap_or("").trim();
        raw.parse().map_err(|_| self.error(format!("cannot parse {what} {raw:?}")))
    }

    /// A finite, nonnegative number.
    pub fn value(&self, i: usize, what: &str) -> Result<f64> {
        let v: f64 = self.parse(i, what)?;
        if !v.is_finite() {
            return Err(self.error(format!("{what} must be finite, got {v}")));
        }
        if v < 0.0 {
            return Err(self.error(format!("negative {what} {v}")));
        }
        Ok(v)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Utf8 { .. } => Error::Parse { path: path.to_path_buf(), line, message: "invalid UTF-8".into() },
        kind => Error::Parse { path: path.to_path_buf(), line, message: format!("{kind:?}") },
    }
}

/// Shortest text that parses back to the same `f64`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn create_file(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create_file(path)?);
    let wrap = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        kind => Error::validation(format!("{}: {kind:?}", path.display())),
    };
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::validation(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Str(s) => s.clone(),
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Str(s) => s.parse().ok(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Cell::Int(v) => Some(*v),
            Cell::Float(_) => None,
            Cell::Str(s) => s.parse().ok(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

/// Column-named rows. CSV files carry a header line; JSON files are
/// `{"columns": [...], "rows": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write(&self, path: &Path, format: ExportFormat) -> Result<()> {
        match format {
            ExportFormat::Csv => {
                let header: Vec<&str> = self.columns.iter().map(String::as_str).collect();
                write_csv(path, &header, self.rows.iter().map(|r| r.iter().map(Cell::to_text).collect()))
            }
            ExportFormat::Json => {
                let mut w = create_file(path)?;
                serde_json::to_writer_pretty(&mut w, self)
                    .map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
                w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
            }
        }
    }

    /// Reads a table written by [`Table::write`]. CSV cells come back as
    /// strings; use the `Cell::as_*` accessors.
    pub fn read(path: &Path, format: ExportFormat) -> Result<Self> {
        match format {
            ExportFormat::Csv => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                let mut reader = csv::Reader::from_reader(io::BufReader::new(file));
                let columns = reader.headers().map_err(|e| csv_error(path, e))?.iter().map(str::to_string).collect();
                let mut rows = Vec::new();
                for rec in reader.records() {
                    let rec = rec.map_err(|e| csv_error(path, e))?;
                    rows.push(rec.iter().map(Cell::from).collect());
                }
                Ok(Self { columns, rows })
            }
            ExportFormat::Json => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                serde_json::from_reader(io::BufReader::new(file)).map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: e.line() as u64,
                    message: e.to_string(),
                })
            }
        }
    }
}
