//! On-disk formats. Numbers are written in shortest round-trip form.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{RunTrace, TracePoint};

use super::runner::RunRecord;

/// Persisted random-sampling target of one (function, dim) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub function: String,
    pub dim: usize,
    pub category: u8,
    pub budget: usize,
    pub reps: usize,
    pub value: f64,
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub(crate) fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

/// As [`csv_bytes`], but emits the header even when there are no rows.
pub(crate) fn csv_bytes_with_header<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Ok(format!("{}\n", header.join(",")).into_bytes());
    }
    csv_bytes(rows)
}

pub(crate) fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidConfig(format!("{}: {other:?}", path.display())),
    })?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_trace(path: &Path, trace: &RunTrace) -> Result<()> {
    write_atomic(
        path,
        &csv_bytes_with_header(&["eval", "best"], &trace.points)?,
    )
}

/// Reads a trace file; the final evaluation count is the last recorded point.
pub fn read_trace(path: &Path) -> Result<RunTrace> {
    let points: Vec<TracePoint> = read_csv(path)?;
    let final_evals = points.last().map_or(0, |p| p.eval);
    Ok(RunTrace {
        points,
        final_evals,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct RunRow {
    algorithm: String,
    function: String,
    dim: usize,
    rep: usize,
    seed: u64,
    evals_used: usize,
    best_fitness: f64,
}

pub(crate) const RUNS_HEADER: [&str; 7] = [
    "algorithm",
    "function",
    "dim",
    "rep",
    "seed",
    "evals_used",
    "best_fitness",
];

pub(crate) fn runs_csv_bytes(records: &[RunRecord]) -> Result<Vec<u8>> {
    let rows: Vec<RunRow> = records
        .iter()
        .map(|r| RunRow {
            algorithm: r.algorithm.clone(),
            function: r.function.clone(),
            dim: r.dim,
            rep: r.rep,
            seed: r.seed,
            evals_used: r.evals_used,
            best_fitness: r.best_fitness,
        })
        .collect();
    csv_bytes_with_header(&RUNS_HEADER, &rows)
}

/// Reads `runs.csv`; trace paths are reconstructed from the run keys.
pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let rows: Vec<RunRow> = read_csv(path)?;
    Ok(rows
        .into_iter()
        .map(|r| RunRecord {
            trace_path: super::runner::trace_file_name(&r.algorithm, &r.function, r.dim, r.rep),
            algorithm: r.algorithm,
            function: r.function,
            dim: r.dim,
            rep: r.rep,
            seed: r.seed,
            evals_used: r.evals_used,
            best_fitness: r.best_fitness,
        })
        .collect())
}

pub fn read_targets_csv(path: &Path) -> Result<Vec<TargetRecord>> {
    read_csv(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let trace = RunTrace {
            points: vec![
                TracePoint {
                    eval: 1,
                    best: 0.1 + 0.2,
                },
                TracePoint {
                    eval: 7,
                    best: 1e-300,
                },
            ],
            final_evals: 7,
        };
        write_trace(&path, &trace).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("eval,best\n"));
        assert_eq!(read_trace(&path).unwrap(), trace);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(
            std::fs::read_dir(path.parent().unwrap()).unwrap().count(),
            1
        );
    }
}
