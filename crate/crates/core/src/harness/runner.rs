use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::RunTrace;
use crate::metrics::estimate_rse_target;
use crate::testfuncs::TestFunction;

use super::io::{
    csv_bytes, read_runs_csv, read_targets_csv, read_trace, runs_csv_bytes, write_atomic,
    write_trace, TargetRecord,
};
use super::seeding::{rse_seed, run_seed};
use super::spec::BenchmarkSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub function: String,
    pub dim: usize,
    pub rep: usize,
    pub seed: u64,
    pub evals_used: usize,
    pub best_fitness: f64,
    /// Relative to the output directory.
    pub trace_path: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub records: Vec<RunRecord>,
    pub targets: Vec<TargetRecord>,
    /// Runs computed by this invocation.
    pub executed: usize,
    /// Runs found complete on disk and reused.
    pub skipped: usize,
}

pub fn trace_file_name(algorithm: &str, function: &str, dim: usize, rep: usize) -> String {
    format!("traces/{algorithm}__{function}__d{dim}__r{rep}.csv")
}

fn record_file(out: &Path, algorithm: &str, function: &str, dim: usize, rep: usize) -> PathBuf {
    out.join("records")
        .join(format!("{algorithm}__{function}__d{dim}__r{rep}.json"))
}

/// Runs one cell of the matrix in memory.
pub fn run_single(
    spec: &BenchmarkSpec,
    algorithm: &str,
    function: &TestFunction,
    rep: usize,
) -> Result<(RunRecord, RunTrace)> {
    let entry = spec
        .algorithm(algorithm)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{algorithm}`")))?;
    let dim = function.dim();
    let seed = run_seed(spec.master_seed, algorithm, &function.label, dim, rep);
    let trace = entry.config.run(function, spec.budget, seed)?;
    let record = RunRecord {
        algorithm: algorithm.to_string(),
        function: function.label.clone(),
        dim,
        rep,
        seed,
        evals_used: trace.final_evals,
        best_fitness: trace.final_best().unwrap_or(f64::INFINITY),
        trace_path: trace_file_name(algorithm, &function.label, dim, rep),
    };
    Ok((record, trace))
}

fn load_completed(
    out: &Path,
    expected_seed: u64,
    key: (&str, &str, usize, usize),
) -> Option<RunRecord> {
    let (a, f, d, r) = key;
    let text = std::fs::read_to_string(record_file(out, a, f, d, r)).ok()?;
    let record: RunRecord = serde_json::from_str(&text).ok()?;
    let complete = record.seed == expected_seed && out.join(&record.trace_path).is_file();
    complete.then_some(record)
}

/// Runs (or resumes) the full matrix and persists records, traces, targets and
/// `runs.csv` under `spec.output_dir`.
///
/// Every completed run leaves a trace file and a record file, each written
/// atomically; a rerun reuses records whose seed matches and recomputes the
/// rest. `runs.csv` is written last, in spec order.
pub fn run_benchmark(spec: &BenchmarkSpec, workers: usize) -> Result<BenchmarkReport> {
    spec.validate()?;
    let out = spec.output_dir.as_path();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_atomic(&out.join("spec.json"), spec.to_json()?.as_bytes())?;

    let pool = worker_pool(workers)?;

    let (cells, functions) = build_cells(spec)?;
    let function_at: HashMap<Cell, &TestFunction> =
        cells.iter().copied().zip(functions.iter()).collect();
    let targets = pool.install(|| compute_targets(spec, &functions))?;
    write_atomic(&out.join("targets.csv"), &csv_bytes(&targets)?)?;

    let jobs: Vec<(usize, usize, usize, usize)> = (0..spec.algorithms.len())
        .flat_map(|ai| {
            cells
                .iter()
                .flat_map(move |&(fi, d)| (0..spec.reps).map(move |rep| (ai, fi, d, rep)))
        })
        .collect();

    let results: Vec<(RunRecord, bool)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ai, fi, d, rep)| {
                let algo = &spec.algorithms[ai].name;
                let label = &spec.functions[fi].label;
                let seed = run_seed(spec.master_seed, algo, label, d, rep);
                if let Some(done) = load_completed(out, seed, (algo, label, d, rep)) {
                    return Ok((done, false));
                }
                let (record, trace) = run_single(spec, algo, function_at[&(fi, d)], rep)?;
                write_trace(&out.join(&record.trace_path), &trace)?;
                write_atomic(
                    &record_file(out, algo, label, d, rep),
                    serde_json::to_string(&record)?.as_bytes(),
                )?;
                Ok((record, true))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let executed = results.iter().filter(|(_, fresh)| *fresh).count();
    let records: Vec<RunRecord> = results.into_iter().map(|(r, _)| r).collect();
    audit_budget(&records, spec.budget)?;
    write_atomic(&out.join("runs.csv"), &runs_csv_bytes(&records)?)?;
    Ok(BenchmarkReport {
        skipped: records.len() - executed,
        executed,
        records,
        targets,
    })
}

/// `(function index, dim)` in spec order.
type Cell = (usize, usize);

/// Every cell of the spec with its built function.
fn build_cells(spec: &BenchmarkSpec) -> Result<(Vec<Cell>, Vec<TestFunction>)> {
    let cells: Vec<Cell> = (0..spec.functions.len())
        .flat_map(|fi| spec.dims.iter().map(move |&d| (fi, d)))
        .collect();
    let functions = cells
        .iter()
        .map(|&(fi, d)| spec.functions[fi].clone().with_dim(d).build())
        .collect::<Result<_>>()?;
    Ok((cells, functions))
}

/// Computes (or reuses) the random-sampling target of every (function, dim)
/// cell and writes `targets.csv`, without running any algorithm.
pub fn rse_targets(spec: &BenchmarkSpec, workers: usize) -> Result<Vec<TargetRecord>> {
    spec.validate()?;
    let pool = worker_pool(workers)?;
    let (_, functions) = build_cells(spec)?;
    let targets = pool.install(|| compute_targets(spec, &functions))?;
    write_atomic(&spec.output_dir.join("targets.csv"), &csv_bytes(&targets)?)?;
    Ok(targets)
}

fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))
}

/// Reuses persisted targets with matching budget and reps; estimates the rest.
fn compute_targets(spec: &BenchmarkSpec, functions: &[TestFunction]) -> Result<Vec<TargetRecord>> {
    let existing: HashMap<(String, usize), TargetRecord> =
        read_targets_csv(&spec.output_dir.join("targets.csv"))
            .unwrap_or_default()
            .into_iter()
            .filter(|t| t.budget == spec.budget && t.reps == spec.reps)
            .map(|t| ((t.function.clone(), t.dim), t))
            .collect();
    functions
        .par_iter()
        .map(|f| {
            if let Some(t) = existing.get(&(f.label.clone(), f.dim())) {
                return Ok(t.clone());
            }
            let seed = rse_seed(spec.master_seed, &f.label, f.dim());
            let t = estimate_rse_target(&f.label, f, spec.budget, spec.reps, seed)?;
            Ok(TargetRecord {
                function: f.label.clone(),
                dim: f.dim(),
                category: f.category,
                budget: spec.budget,
                reps: spec.reps,
                value: t.value,
            })
        })
        .collect()
}

pub(crate) fn audit_budget(records: &[RunRecord], budget: usize) -> Result<()> {
    match records.iter().find(|r| r.evals_used > budget) {
        Some(r) => Err(Error::BudgetAudit(format!(
            "{} on {} (d={}, rep {}) used {} > {budget} evaluations",
            r.algorithm, r.function, r.dim, r.rep, r.evals_used
        ))),
        None => Ok(()),
    }
}

/// Loads `runs.csv` and every referenced trace from an output directory.
pub fn load_runs(out: &Path) -> Result<Vec<(RunRecord, RunTrace)>> {
    read_runs_csv(&out.join("runs.csv"))?
        .into_iter()
        .map(|r| {
            let trace = read_trace(&out.join(&r.trace_path))?;
            Ok((r, trace))
        })
        .collect()
}
