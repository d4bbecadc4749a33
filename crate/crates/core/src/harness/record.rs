use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EncodingStrategy, HarnessError};

pub const CSV_HEADER: &str =
    "circuit_id,width,strategy,k,n1q,n2q,n3q,depth_max,depth_mean,n_nonlocal,conn_minus_1,compile_time_s";

/// One benchmark row. Counts exclude telegate markers; depths include them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub circuit_id: String,
    pub width: usize,
    pub strategy: EncodingStrategy,
    pub k: usize,
    pub n1q: usize,
    pub n2q: usize,
    pub n3q: usize,
    pub depth_max: usize,
    pub depth_mean: f64,
    pub n_nonlocal: usize,
    pub conn_minus_1: u64,
    pub compile_time_s: f64,
}

impl MetricsRecord {
    pub fn total_gates(&self) -> usize {
        self.n1q + self.n2q + self.n3q
    }
}

fn csv_error(path: &str, e: csv::Error) -> HarnessError {
    let msg = match e.position() {
        Some(pos) => format!("line {}: {e}", pos.line()),
        None => e.to_string(),
    };
    HarnessError::Csv { path: path.to_string(), msg }
}

pub fn write_csv_to<W: Write>(out: W, records: &[MetricsRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(|e| csv_error("<output>", e))?;
    }
    for r in records {
        w.serialize(r).map_err(|e| csv_error("<output>", e))?;
    }
    w.flush().map_err(|e| HarnessError::Io { path: "<output>".into(), source: e })
}

pub fn write_csv(path: &Path, records: &[MetricsRecord]) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.display().to_string(), source };
    let file = File::create(path).map_err(io)?;
    write_csv_to(file, records)
}

/// Parses records, requiring the exact header. `label` names the source in
/// error messages.
pub fn read_csv_from<R: Read>(input: R, label: &str) -> Result<Vec<MetricsRecord>, HarnessError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| csv_error(label, e))?;
    let found: Vec<&str> = header.iter().collect();
    if found.join(",") != CSV_HEADER {
        return Err(HarnessError::Csv {
            path: label.to_string(),
            msg: format!("unexpected header {:?}, expected {CSV_HEADER:?}", found.join(",")),
        });
    }
    rd.deserialize().map(|r| r.map_err(|e| csv_error(label, e))).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<MetricsRecord>, HarnessError> {
    let label = path.display().to_string();
    let file = File::open(path).map_err(|source| HarnessError::Io { path: label.clone(), source })?;
    read_csv_from(file, &label)
}
