use std::io::{Read, Write};

use crate::{FlowError, MonitorRecord};

/// Column order of the monitor CSV.
pub const MONITOR_HEADER: [&str; 11] =
    ["time", "L", "A", "kappa_bar", "total_curvature", "kappa_max", "kappa_min", "kappa_a", "kappa_b", "dt", "kappa_sq_integral"];

pub fn write_monitors<W: Write>(writer: W, records: &[MonitorRecord]) -> Result<(), FlowError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r).map_err(|e| FlowError::Monitors(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(MONITOR_HEADER).map_err(|e| FlowError::Monitors(e.to_string()))?;
    }
    w.flush().map_err(|e| FlowError::Monitors(e.to_string()))
}

pub fn monitors_to_string(records: &[MonitorRecord]) -> String {
    let mut buf = Vec::new();
    write_monitors(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Reads a monitor CSV. The `kappa_sq_integral` column is optional; extra
/// columns are ignored. Rows with non-finite time are rejected, as are
/// decreasing times.
pub fn read_monitors<R: Read>(reader: R) -> Result<Vec<MonitorRecord>, FlowError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out: Vec<MonitorRecord> = Vec::new();
    for row in r.deserialize() {
        let rec: MonitorRecord = row.map_err(|e| FlowError::Monitors(e.to_string()))?;
        if !rec.time.is_finite() {
            return Err(FlowError::Monitors("non-finite time".into()));
        }
        if let Some(prev) = out.last() {
            if rec.time < prev.time {
                return Err(FlowError::Monitors(format!("time decreases at row {}", out.len() + 1)));
            }
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn parse_monitors(text: &str) -> Result<Vec<MonitorRecord>, FlowError> {
    read_monitors(text.as_bytes())
}
