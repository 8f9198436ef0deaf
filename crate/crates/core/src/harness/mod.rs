//! Benchmark orchestration: run matrices, persistence and summary tables.

mod io;
mod runner;
mod seeding;
mod spec;
mod summary;

pub use io::{
    read_runs_csv, read_targets_csv, read_trace, write_atomic, write_trace, TargetRecord,
};
pub use runner::{
    load_runs, rse_targets, run_benchmark, run_single, trace_file_name, BenchmarkReport, RunRecord,
};
pub use seeding::{rse_seed, run_seed};
pub use spec::{AlgorithmEntry, BenchmarkSpec};
pub use summary::{
    summarize, write_summary, BnfvCurve, CellErt, SummaryRow, SummaryTable, BNFV_GRID_STEP,
};
