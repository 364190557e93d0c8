use std::io::{BufRead, Write};

use crate::solvers::TraceRecord;
use crate::{Error, Result};

pub const TRACE_HEADER: &str = "outer,data_passes,wall_ms,objective,suboptimality,nnz,gradmap_norm";

/// Formats a real with 17 significant digits, enough for a lossless
/// f64 round trip.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the trace CSV (header plus one row per record) and returns the
/// number of bytes written. The suboptimality field is left blank when
/// absent.
pub fn write_trace<W: Write>(records: &[TraceRecord], sink: &mut W) -> Result<usize> {
    let mut bytes = 0usize;
    let mut emit = |line: &str| -> Result<()> {
        sink.write_all(line.as_bytes())?;
        sink.write_all(b"\n")?;
        bytes += line.len() + 1;
        Ok(())
    };
    emit(TRACE_HEADER)?;
    for r in records {
        let sub = r.suboptimality.map(format_g17).unwrap_or_default();
        emit(&format!(
            "{},{},{},{},{},{},{}",
            r.outer,
            format_g17(r.data_passes),
            format_g17(r.wall_ms),
            format_g17(r.objective),
            sub,
            r.nnz,
            format_g17(r.gradmap_norm),
        ))?;
    }
    Ok(bytes)
}

/// Reads a trace CSV back into records, verifying the header and the
/// strictly increasing outer index.
pub fn read_trace<R: BufRead>(source: R) -> Result<Vec<TraceRecord>> {
    let mut lines = source.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(Error::Parse {
            line: 1,
            msg: "empty trace file".into(),
        }),
    };
    if header.trim_end() != TRACE_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected trace header: {header}"),
        });
    }
    let mut records = Vec::new();
    let mut last_outer = 0usize;
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let record = TraceRecord {
            outer: parse_field(fields[0], lineno)?,
            data_passes: parse_field(fields[1], lineno)?,
            wall_ms: parse_field(fields[2], lineno)?,
            objective: parse_field(fields[3], lineno)?,
            suboptimality: if fields[4].is_empty() {
                None
            } else {
                Some(parse_field(fields[4], lineno)?)
            },
            nnz: parse_field(fields[5], lineno)?,
            gradmap_norm: parse_field(fields[6], lineno)?,
        };
        if record.outer <= last_outer {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("outer index {} does not increase", record.outer),
            });
        }
        last_outer = record.outer;
        records.push(record);
    }
    Ok(records)
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse field {field:?}"),
    })
}
