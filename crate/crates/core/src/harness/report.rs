use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::trial::TrialRecord;

/// Column order of CSV reports; always written, even with no records.
pub const CSV_HEADER: [&str; 15] = [
    "instance_id",
    "algorithm",
    "p",
    "c",
    "q",
    "seed",
    "value",
    "opt",
    "ratio",
    "value_queries",
    "independence_queries",
    "avg_queries_per_element",
    "peak_elements",
    "accepted",
    "runtime_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// Guesses the format from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format `{other}`"))),
        }
    }
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[TrialRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")
        .map_err(|e| Error::Json(serde_json::Error::io(e)))?;
    Ok(())
}

fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if !header.iter().eq(CSV_HEADER) {
        return Err(Error::Validation(format!(
            "unexpected report header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn emit_report(
    records: &[TrialRecord],
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        ReportFormat::Csv => write_csv(records, &mut out)?,
        ReportFormat::Json => write_json(records, &mut out)?,
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_report(path: impl AsRef<Path>, format: ReportFormat) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    let file = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    match format {
        ReportFormat::Csv => read_csv(file),
        ReportFormat::Json => Ok(serde_json::from_reader(file)?),
    }
}
