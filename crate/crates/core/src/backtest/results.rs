use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use super::{BacktestResult, Halt, YearMonth};
use crate::error::{Error, Result};

pub const RESULTS_HEADER: &str = "genome_id,pair,month,final_profit,halt_reason,halt_t";

/// Summary line of one backtested episode.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub genome_id: String,
    pub pair: String,
    pub month: YearMonth,
    pub final_profit: f64,
    pub halt: Halt,
    pub halt_t: Option<usize>,
}

impl From<&BacktestResult> for ResultRow {
    fn from(r: &BacktestResult) -> Self {
        ResultRow {
            genome_id: r.genome_id.clone(),
            pair: r.pair.clone(),
            month: r.month,
            final_profit: r.final_profit(),
            halt: r.halt,
            halt_t: r.halt_t,
        }
    }
}

pub fn write_results<W: Write>(rows: &[ResultRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for r in rows {
        let halt_t = r.halt_t.map(|t| t.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.genome_id, r.pair, r.month, r.final_profit, r.halt, halt_t
        )?;
    }
    Ok(())
}

pub fn read_results<R: BufRead>(input: R, path: &Path) -> Result<Vec<ResultRow>> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::io(path, e))?,
        None => return Err(parse_err(1, "missing header".into())),
    };
    let expected: Vec<&str> = RESULTS_HEADER.split(',').collect();
    let found: Vec<&str> = header.trim().split(',').collect();
    for (i, name) in expected.iter().enumerate() {
        if found.get(i) != Some(name) {
            return Err(parse_err(1, format!("expected column `{name}` at position {}", i + 1)));
        }
    }

    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != expected.len() {
            return Err(parse_err(
                i + 1,
                format!("expected {} fields, found {}", expected.len(), f.len()),
            ));
        }
        let col = |c: usize, e: String| parse_err(i + 1, format!("column `{}`: {e}", expected[c]));
        let halt_t = if f[5].is_empty() {
            None
        } else {
            Some(f[5].parse().map_err(|e| col(5, format!("{e}")))?)
        };
        rows.push(ResultRow {
            genome_id: f[0].to_string(),
            pair: f[1].to_string(),
            month: f[2].parse().map_err(|e| col(2, format!("{e}")))?,
            final_profit: f[3].parse().map_err(|e| col(3, format!("{e}")))?,
            halt: f[4].parse().map_err(|e| col(4, format!("{e}")))?,
            halt_t,
        });
    }
    Ok(rows)
}

/// Total profit per genome over all rows.
pub fn total_profits(rows: &[ResultRow]) -> BTreeMap<String, f64> {
    let mut totals = BTreeMap::new();
    for r in rows {
        *totals.entry(r.genome_id.clone()).or_insert(0.0) += r.final_profit;
    }
    totals
}

/// The `k` genome ids with the largest total profit, best first; equal
/// totals are ordered by id.
pub fn select_elite(rows: &[ResultRow], k: usize) -> Vec<String> {
    let mut totals: Vec<(String, f64)> = total_profits(rows).into_iter().collect();
    if totals.len() < k {
        log::warn!("only {} genomes available for an elite of {k}", totals.len());
    }
    totals.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    totals.into_iter().take(k).map(|(id, _)| id).collect()
}
