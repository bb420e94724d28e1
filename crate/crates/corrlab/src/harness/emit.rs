//! Result persistence: an exact-schema CSV and a JSON array of the same
//! records, plus the JSON reader used for round-trips.

use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::ResultRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

pub const CSV_HEADER: &str = "scenario,topology,engine,M,K,metric,statistic,value,seed";

/// CSV with the fixed column set, LF line endings and shortest-round-trip
/// float formatting (full precision).
pub fn results_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.scenario, r.topology, r.engine, r.m, r.k, r.metric, r.statistic, r.value, r.seed
        ));
    }
    out
}

/// JSON array of the same records.
pub fn results_to_json(rows: &[ResultRow]) -> Result<String> {
    serde_json::to_string(rows).map_err(|e| Error::ConfigValidation {
        field: "rows".into(),
        msg: format!("JSON serialization failed: {e}"),
    })
}

/// Parses a JSON results file back into rows.
pub fn parse_results_json(text: &str) -> Result<Vec<ResultRow>> {
    serde_json::from_str(text).map_err(|e| Error::ConfigParse {
        line: e.line(),
        msg: format!("results JSON: {e}"),
    })
}

/// Writes rows to `path` in the chosen format.
pub fn emit_results(rows: &[ResultRow], format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter {
            name: "rows",
            reason: "nothing to emit".into(),
        });
    }
    let path = path.as_ref();
    let payload = match format {
        OutputFormat::Csv => results_to_csv(rows),
        OutputFormat::Json => results_to_json(rows)?,
    };
    std::fs::write(path, payload).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ResultRow {
        ResultRow {
            scenario: "demo".into(),
            topology: "ura".into(),
            engine: "closed_form".into(),
            m: 100,
            k: 10,
            metric: "lambda_range".into(),
            statistic: "median".into(),
            value: 6.5625,
            seed: 42,
        }
    }

    #[test]
    fn one_row_gives_two_csv_lines() {
        let csv = results_to_csv(&[sample_row()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "demo,ura,closed_form,100,10,lambda_range,median,6.5625,42");
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let rows = vec![
            sample_row(),
            ResultRow {
                statistic: "cdf:0.5".into(),
                value: 0.1234567890123456789,
                ..sample_row()
            },
        ];
        let json = results_to_json(&rows).unwrap();
        let back = parse_results_json(&json).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn empty_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_results(&[], OutputFormat::Csv, dir.path().join("x.csv"));
        assert!(err.is_err());
    }

    #[test]
    fn writes_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![sample_row()];
        let csv_path = dir.path().join("r.csv");
        let json_path = dir.path().join("r.json");
        emit_results(&rows, OutputFormat::Csv, &csv_path).unwrap();
        emit_results(&rows, OutputFormat::Json, &json_path).unwrap();
        let csv = std::fs::read_to_string(&csv_path).unwrap();
        assert!(csv.starts_with(CSV_HEADER));
        let back = parse_results_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = emit_results(&[sample_row()], OutputFormat::Csv, "/nonexistent-dir/x.csv");
        match err {
            Err(Error::Io { path, .. }) => assert!(path.contains("nonexistent-dir")),
            other => panic!("expected Io error, got {other:?}"),
        }
    }
}
