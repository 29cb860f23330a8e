use std::io::{BufRead, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};

use crate::error::{Error, Result};

const TIME_FORMAT: &str = "%Y%m%d %H:%M:%S%.3f";

/// One quote: `pair,YYYYMMDD HH:MM:SS.mmm,bid,ask`, timestamps in UTC.
#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord {
    pub pair: String,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: i64,
    pub bid: f64,
    pub ask: f64,
}

impl TickRecord {
    pub fn mid(&self) -> f64 {
        (self.bid + self.ask) / 2.0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ingested {
    /// Valid records in timestamp order (file order among equal stamps).
    pub records: Vec<TickRecord>,
    /// Lines dropped because bid exceeded ask.
    pub rejected: usize,
}

/// Parses a tick file. A malformed line is an error; a crossed quote is
/// dropped and counted.
pub fn ingest_ticks<R: BufRead>(input: R, path: &Path) -> Result<Ingested> {
    let mut out = Ingested::default();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, found {}", fields.len())));
        }
        let time = NaiveDateTime::parse_from_str(fields[1], TIME_FORMAT)
            .map_err(|e| parse_err(format!("timestamp `{}`: {e}", fields[1])))?;
        let bid: f64 = fields[2].parse().map_err(|e| parse_err(format!("bid: {e}")))?;
        let ask: f64 = fields[3].parse().map_err(|e| parse_err(format!("ask: {e}")))?;
        if !(bid.is_finite() && ask.is_finite()) || bid <= 0.0 {
            return Err(parse_err("quotes must be finite and positive".into()));
        }
        if bid > ask {
            out.rejected += 1;
            continue;
        }
        out.records.push(TickRecord {
            pair: fields[0].to_string(),
            timestamp_ms: time.and_utc().timestamp_millis(),
            bid,
            ask,
        });
    }
    out.records.sort_by_key(|r| r.timestamp_ms);
    Ok(out)
}

pub fn load_ticks(path: &Path) -> Result<Ingested> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_ticks(std::io::BufReader::new(file), path)
}

pub fn write_ticks<W: Write>(records: &[TickRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        let time = DateTime::from_timestamp_millis(r.timestamp_ms)
            .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "timestamp out of range"))?;
        writeln!(
            out,
            "{},{},{},{}",
            r.pair,
            time.naive_utc().format(TIME_FORMAT),
            r.bid,
            r.ask
        )?;
    }
    Ok(())
}
