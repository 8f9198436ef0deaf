use std::fs;
use std::path::Path;

use sqgde_core::algos::{AlgorithmConfig, DEConfig};
use sqgde_core::harness::{
    load_runs, read_runs_csv, run_benchmark, summarize, write_summary, AlgorithmEntry,
    BenchmarkSpec, RunRecord, TargetRecord,
};
use sqgde_core::testfuncs::{BaseFunction, FunctionDescriptor};
use sqgde_core::{Error, RunTrace, TracePoint};

fn small_spec(out: &Path) -> BenchmarkSpec {
    let pick = |name: &str| AlgorithmEntry {
        name: name.into(),
        config: AlgorithmConfig::preset(name).unwrap(),
    };
    BenchmarkSpec {
        algorithms: vec![pick("DE"), pick("SQG-DE")],
        functions: vec![
            FunctionDescriptor::single("sphere", BaseFunction::Sphere).shifted(),
            FunctionDescriptor::single("rastrigin", BaseFunction::Rastrigin).shifted(),
        ],
        dims: vec![5],
        budget: 300,
        reps: 5,
        master_seed: 11,
        output_dir: out.to_path_buf(),
    }
}

#[test]
fn matrix_has_one_record_per_key() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = small_spec(dir.path());
    spec.functions.truncate(1);
    let report = run_benchmark(&spec, 2).unwrap();
    assert_eq!(report.records.len(), 10);
    assert_eq!(report.executed, 10);
    assert_eq!(report.targets.len(), 1);
    assert!(report.records.iter().all(|r| r.evals_used <= 300));
    assert_eq!(
        read_runs_csv(&dir.path().join("runs.csv")).unwrap(),
        report.records
    );
}

#[test]
fn runs_csv_is_byte_identical_across_reruns_and_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_benchmark(&small_spec(a.path()), 1).unwrap();
    run_benchmark(&small_spec(b.path()), 4).unwrap();
    let runs_a = fs::read(a.path().join("runs.csv")).unwrap();
    assert_eq!(runs_a, fs::read(b.path().join("runs.csv")).unwrap());

    let header = String::from_utf8(runs_a.clone()).unwrap();
    assert!(header.starts_with("algorithm,function,dim,rep,seed,evals_used,best_fitness\n"));
}

#[test]
fn interrupted_output_resumes_to_the_same_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_spec(dir.path());
    run_benchmark(&spec, 3).unwrap();
    let runs = fs::read(dir.path().join("runs.csv")).unwrap();
    let trace = fs::read(dir.path().join("traces/SQG-DE__rastrigin__d5__r2.csv")).unwrap();

    fs::remove_file(dir.path().join("runs.csv")).unwrap();
    fs::remove_file(dir.path().join("records/DE__sphere__d5__r0.json")).unwrap();
    fs::remove_file(dir.path().join("records/SQG-DE__rastrigin__d5__r2.json")).unwrap();
    fs::remove_file(dir.path().join("traces/DE__rastrigin__d5__r4.csv")).unwrap();

    let report = run_benchmark(&spec, 3).unwrap();
    assert_eq!(report.executed, 3);
    assert_eq!(report.skipped, 17);
    assert_eq!(fs::read(dir.path().join("runs.csv")).unwrap(), runs);
    assert_eq!(
        fs::read(dir.path().join("traces/SQG-DE__rastrigin__d5__r2.csv")).unwrap(),
        trace
    );
}

#[test]
fn changing_the_master_seed_reruns_everything() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = small_spec(dir.path());
    run_benchmark(&spec, 2).unwrap();
    spec.master_seed += 1;
    assert_eq!(run_benchmark(&spec, 2).unwrap().executed, 20);
}

#[test]
fn invalid_spec_fails_before_writing_anything() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut spec = small_spec(&out);
    spec.algorithms.push(AlgorithmEntry {
        name: "tiny".into(),
        config: AlgorithmConfig::De(DEConfig {
            pop_size: 6,
            ..DEConfig::sqg_best_w_bin()
        }),
    });
    let err = run_benchmark(&spec, 1).unwrap_err();
    assert!(err.to_string().contains("pop_size >= 12"), "{err}");
    assert!(!out.exists());
}

#[test]
fn load_runs_round_trips_traces() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_benchmark(&small_spec(dir.path()), 2).unwrap();
    let loaded = load_runs(dir.path()).unwrap();
    assert_eq!(loaded.len(), report.records.len());
    for (record, trace) in &loaded {
        assert_eq!(trace.final_best(), Some(record.best_fitness));
        assert_eq!(trace.final_evals, record.evals_used);
        assert!(trace.is_monotone());
    }
}

fn synthetic(
    algorithm: &str,
    function: &str,
    hit: Option<usize>,
    budget: usize,
) -> (RunRecord, RunTrace) {
    let mut points = vec![TracePoint { eval: 1, best: 5.0 }];
    if let Some(e) = hit {
        points.push(TracePoint { eval: e, best: 0.5 });
    }
    let trace = RunTrace {
        points,
        final_evals: budget,
    };
    let record = RunRecord {
        algorithm: algorithm.into(),
        function: function.into(),
        dim: 2,
        rep: 0,
        seed: 0,
        evals_used: budget,
        best_fitness: trace.final_best().unwrap(),
        trace_path: String::new(),
    };
    (record, trace)
}

fn target(function: &str, category: u8) -> TargetRecord {
    TargetRecord {
        function: function.into(),
        dim: 2,
        category,
        budget: 1000,
        reps: 1,
        value: 1.0,
    }
}

#[test]
fn dominated_algorithm_over_six_functions_has_p_0_03125() {
    let labels = ["a", "b", "c", "d", "e", "f"];
    let mut runs = Vec::new();
    for (i, f) in labels.iter().enumerate() {
        runs.push(synthetic("fast", f, Some(10 + i), 1000));
        runs.push(synthetic("slow", f, Some(500 + 7 * i), 1000));
    }
    let targets: Vec<_> = labels.iter().map(|f| target(f, 1)).collect();
    let table = summarize(&runs, &targets, 1000).unwrap();

    let all: Vec<_> = table.rows.iter().filter(|r| r.category == "all").collect();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].algorithm, "fast");
    assert_eq!(all[0].p_vs_best, None);
    assert_eq!(all[1].p_vs_best, Some(0.03125));
}

#[test]
fn single_cell_table_has_no_p_values() {
    let runs = vec![synthetic("only", "a", Some(40), 1000)];
    let table = summarize(&runs, &[target("a", 3)], 1000).unwrap();
    assert_eq!(table.cells.len(), 1);
    assert_eq!(table.cells[0].ert.value.value(), 40.0);
    assert!(table.rows.iter().all(|r| r.p_vs_best.is_none()));
    let cats: Vec<_> = table.rows.iter().map(|r| r.category.as_str()).collect();
    assert_eq!(cats, ["3", "all"]);
}

#[test]
fn unsolved_cell_is_flagged_as_a_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let runs = vec![
        synthetic("never", "a", None, 1000),
        synthetic("never", "a", None, 1000),
        synthetic("hits", "a", Some(100), 1000),
        synthetic("hits", "a", Some(300), 1000),
    ];
    let table = summarize(&runs, &[target("a", 2)], 1000).unwrap();
    write_summary(dir.path(), &table).unwrap();

    let ert = fs::read_to_string(dir.path().join("ert.csv")).unwrap();
    assert!(ert.contains("never,a,2,2000.0,true,0.0"), "{ert}");
    assert!(ert.contains("hits,a,2,200.0,false,1.0"), "{ert}");
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("category,dim,algorithm,mean_ert,flag,p_vs_best\n"));
    assert!(summary.contains("all,2,never,2000.0,>,"), "{summary}");
    assert!(dir.path().join("bnfv/hits__a__d2.csv").is_file());
    assert!(dir.path().join("summary.json").is_file());
}

#[test]
fn summary_refuses_over_budget_records() {
    let mut run = synthetic("x", "a", Some(3), 1000);
    run.0.evals_used = 1001;
    let err = summarize(&[run], &[target("a", 1)], 1000).unwrap_err();
    assert!(matches!(err, Error::BudgetAudit(_)));
}

#[test]
fn zero_target_writes_raw_curves() {
    let dir = tempfile::tempdir().unwrap();
    let mut t = target("a", 1);
    t.value = 0.0;
    let table = summarize(&[synthetic("x", "a", Some(3), 100)], &[t], 100).unwrap();
    assert!(!table.curves[0].normalized);
    write_summary(dir.path(), &table).unwrap();
    let curve = fs::read_to_string(dir.path().join("bfv/x__a__d2.csv")).unwrap();
    assert!(
        curve.starts_with("eval,mean,median\n10,0.5,0.5\n"),
        "{curve}"
    );
}
