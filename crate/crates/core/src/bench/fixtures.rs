//! Published results of other algorithms, shipped as static data.
//!
//! Same columns as the summary CSV plus `source`. Rows carry no per-run
//! values, so they are reported next to measured cells but never tested.

use std::io::Read;
use std::path::Path;

use super::{CellSummary, Metric, ResultTable, Source};
use crate::{Error, Result};

/// Mean (sd) over 31 runs of six algorithms on the 2-objective suite.
pub const PUBLISHED_CSV: &str = include_str!("../../data/published.csv");

pub fn read_fixtures<R: Read>(reader: R, source: &Path) -> Result<Vec<CellSummary>> {
    let bad = |reason: String| Error::Csv { path: source.to_path_buf(), reason };
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        if row.len() != 8 {
            return Err(bad(format!("row {}: expected 8 fields, found {}", line + 1, row.len())));
        }
        let num = |i: usize| row[i].trim().parse::<f64>().map_err(|e| bad(format!("row {}: {e}", line + 1)));
        let limit = if row[5].trim().is_empty() { None } else { Some(num(5)?) };
        let n_runs = row[6].trim().parse::<usize>().map_err(|e| bad(format!("row {}: {e}", line + 1)))?;
        if row[7].trim() != "paper" {
            return Err(bad(format!("row {}: unexpected source `{}`", line + 1, &row[7])));
        }
        out.push(CellSummary {
            problem: row[0].to_string(),
            algorithm: row[1].to_string(),
            metric: Metric::from_name(&row[2])?,
            mean: num(3)?,
            sd: num(4)?,
            limit,
            n_runs,
            values: Vec::new(),
            complete: true,
            source: Source::Published,
            best: false,
        });
    }
    Ok(out)
}

pub fn published_results() -> Vec<CellSummary> {
    read_fixtures(PUBLISHED_CSV.as_bytes(), Path::new("published.csv")).expect("embedded fixture is well formed")
}

/// Appends fixture rows for the problems present in `table`.
pub fn export_fixture_comparison(table: &ResultTable, fixtures: &[CellSummary]) -> ResultTable {
    let mut merged = table.clone();
    for f in fixtures {
        if table.cells.iter().any(|c| c.problem == f.problem) {
            merged.cells.push(f.clone());
        }
    }
    merged
}
