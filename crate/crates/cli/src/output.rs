//! Rendering of command results as aligned text, JSON or CSV.

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// A command result with a tabular view. The JSON view is the serde form
/// unless [`Report::json`] is overridden.
pub trait Report: Serialize {
    fn headers(&self) -> Vec<&'static str>;

    fn rows(&self) -> Vec<Vec<String>>;

    /// Extra `key = value` lines shown above the table view only.
    fn preamble(&self) -> Vec<String> {
        Vec::new()
    }

    /// Replaces the aligned table view entirely.
    fn table(&self) -> Option<String> {
        None
    }

    fn json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => report.json(),
        Format::Csv => csv_text(report),
        Format::Table => Ok(report.table().unwrap_or_else(|| table_text(report))),
    }
}

fn csv_text<R: Report>(report: &R) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(report.headers())?;
    for row in report.rows() {
        writer.write_record(&row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

fn table_text<R: Report>(report: &R) -> String {
    let mut out = String::new();
    for line in report.preamble() {
        out.push_str(&line);
        out.push('\n');
    }
    let headers: Vec<String> = report.headers().into_iter().map(String::from).collect();
    let rows = report.rows();
    let mut widths = vec![0usize; headers.len()];
    for row in std::iter::once(&headers).chain(&rows) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut push_row = |row: &[String]| {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    };
    push_row(&headers);
    for row in &rows {
        push_row(row);
    }
    out
}

/// `v1=1 v2=0` style rendering of a keyed vector.
pub fn keyed(map: &std::collections::BTreeMap<String, i64>, order: &[String]) -> String {
    order
        .iter()
        .filter_map(|v| map.get(v).map(|x| format!("{v}={x}")))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Pairs(Vec<(u32, String)>);

    impl Report for Pairs {
        fn headers(&self) -> Vec<&'static str> {
            vec!["n", "label"]
        }

        fn rows(&self) -> Vec<Vec<String>> {
            self.0.iter().map(|(n, s)| vec![n.to_string(), s.clone()]).collect()
        }
    }

    #[test]
    fn table_aligns_columns() {
        let r = Pairs(vec![(1, "a".into()), (100, "b,c".into())]);
        assert_eq!(render(&r, Format::Table).unwrap(), "n    label\n1    a\n100  b,c\n");
    }

    #[test]
    fn csv_quotes_commas() {
        let r = Pairs(vec![(7, "b,c".into())]);
        assert_eq!(render(&r, Format::Csv).unwrap(), "n,label\n7,\"b,c\"\n");
    }
}
