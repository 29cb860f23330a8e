//! Minimal CSV plumbing for the artifact files, all of which are plain
//! comma-separated numbers and identifiers without quoting.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context};

pub fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("{}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("{}", path.display()))?;
    Ok(BufReader::new(file))
}

/// Rows of a CSV file whose header must equal `columns`.
pub struct Table {
    pub rows: Vec<Vec<String>>,
    path: String,
    columns: &'static [&'static str],
}

impl Table {
    pub fn read(path: &Path, columns: &'static [&'static str]) -> anyhow::Result<Self> {
        let shown = path.display().to_string();
        let mut lines = open(path)?.lines();
        let header = match lines.next() {
            Some(line) => line.with_context(|| shown.clone())?,
            None => bail!("{shown}: missing header"),
        };
        let found: Vec<&str> = header.trim().split(',').collect();
        for (i, want) in columns.iter().enumerate() {
            match found.get(i) {
                Some(got) if got == want => {}
                Some(got) => bail!("{shown}: column {}: expected `{want}`, found `{got}`", i + 1),
                None => bail!("{shown}: missing column `{want}`"),
            }
        }
        if found.len() > columns.len() {
            bail!("{shown}: unexpected column `{}`", found[columns.len()]);
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.with_context(|| shown.clone())?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<String> = line.trim().split(',').map(str::to_string).collect();
            if fields.len() != columns.len() {
                bail!(
                    "{shown}:{}: expected {} fields, found {}",
                    i + 2,
                    columns.len(),
                    fields.len()
                );
            }
            rows.push(fields);
        }
        Ok(Table {
            rows,
            path: shown,
            columns,
        })
    }

    /// Parses field `column` of row `row`.
    pub fn get<T>(&self, row: usize, column: &str) -> anyhow::Result<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let c = self
            .columns
            .iter()
            .position(|&name| name == column)
            .ok_or_else(|| anyhow!("{}: no column `{column}`", self.path))?;
        let raw = &self.rows[row][c];
        raw.parse()
            .map_err(|e| anyhow!("{}:{}: column `{column}`: {e}", self.path, row + 2))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn write_header<W: Write>(out: &mut W, columns: &[&str]) -> std::io::Result<()> {
    writeln!(out, "{}", columns.join(","))
}
