//! Table output: CSV files with a header row and `\n` line ends, plus fixed
//! number formatting so reruns are byte-identical.

use std::fs;
use std::path::Path;

use csv::{Terminator, WriterBuilder};

use crate::error::{CliError, CliResult};

pub const NA: &str = "NA";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = WriterBuilder::new()
            .terminator(Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for row in std::iter::once(&self.header).chain(&self.rows) {
            w.write_record(row).expect("writing to memory cannot fail");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_text(path, &self.to_csv())
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Fixed-point with `places` decimals; never prints `-0.000`.
pub fn fixed(value: f64, places: usize) -> String {
    let s = format!("{value:.places$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn num(value: f64) -> String {
    fixed(value, 6)
}

pub fn opt(value: Option<f64>) -> String {
    value.map_or_else(|| NA.to_string(), num)
}

pub fn opt_fixed(value: Option<f64>, places: usize) -> String {
    value.map_or_else(|| NA.to_string(), |v| fixed(v, places))
}

/// GitHub-style markdown table.
pub fn markdown(table: &Table) -> String {
    let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
    let mut out = line(&table.header);
    out.push_str(&line(&vec!["---".to_string(); table.header.len()]));
    for row in &table.rows {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_unsigned() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-0.5), "-0.500000");
        assert_eq!(fixed(99.1912, 2), "99.19");
    }

    #[test]
    fn csv_quotes_and_newlines() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["x,y".into(), "1".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1\n");
    }

    #[test]
    fn markdown_layout() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), NA.into()]);
        assert_eq!(markdown(&t), "| a | b |\n| --- | --- |\n| 1 | NA |\n");
    }
}
