//! CSV persistence for sweep results.
//!
//! Columns: `scheme,sweep_kind,sweep_value,seed,avg_energy_j,status`.
//! Serialization goes through the same float formatter both ways, so a
//! write/read round trip reproduces the rows exactly and equal row sets
//! produce byte-identical files.

use crate::simkit::sweep::ResultRow;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed results file: {0}")]
    Format(#[from] csv::Error),
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CsvError> {
    let file = std::fs::File::create(path)
        .map_err(|source| CsvError::Io { path: path.display().to_string(), source })?;
    let mut writer = csv::Writer::from_writer(file);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|source| CsvError::Io { path: path.display().to_string(), source })?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>, CsvError> {
    let file = std::fs::File::open(path)
        .map_err(|source| CsvError::Io { path: path.display().to_string(), source })?;
    let mut reader = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::SchemeId;
    use crate::model::SolveStatus;
    use crate::simkit::config::SweepKind;

    fn sample_rows() -> Vec<ResultRow> {
        vec![
            ResultRow {
                scheme: SchemeId::Proposed,
                sweep_kind: SweepKind::TaskBits,
                sweep_value: 1e5,
                seed: 1000,
                avg_energy_j: 1.234e-4,
                status: SolveStatus::Optimal,
            },
            ResultRow {
                scheme: SchemeId::LocalOnly,
                sweep_kind: SweepKind::TaskBits,
                sweep_value: 1e5,
                seed: 1001,
                avg_energy_j: f64::INFINITY,
                status: SolveStatus::Infeasible,
            },
        ]
    }

    #[test]
    fn round_trip_preserves_rows_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = sample_rows();
        write_csv(&path, &rows).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn header_is_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        write_csv(&path, &sample_rows()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, "scheme,sweep_kind,sweep_value,seed,avg_energy_j,status");
        assert!(text.lines().nth(1).unwrap().starts_with("proposed,task_bits,"));
    }

    #[test]
    fn equal_rows_write_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_csv(&a, &sample_rows()).unwrap();
        write_csv(&b, &sample_rows()).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = read_csv(Path::new("/nonexistent/rows.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/rows.csv"));
    }
}
