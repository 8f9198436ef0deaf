use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sqgde_core::algos::AlgorithmConfig;
use sqgde_core::harness::{
    load_runs, read_targets_csv, rse_targets, run_benchmark, run_single, summarize, write_summary,
    write_trace, AlgorithmEntry, BenchmarkSpec,
};
use sqgde_core::stats::wilcoxon_signed_rank;
use sqgde_core::{Error, Result};

#[derive(Parser)]
#[command(name = "sqgde", version, about = "SQG-DE benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one function and print a line per repetition.
    Run(Overrides),
    /// Run the full matrix, then write ERT and summary tables.
    Bench(Overrides),
    /// Compute random-sampling targets only.
    Rse(Overrides),
    /// Rebuild ERT and summary tables from a finished output directory.
    Summarize(Overrides),
    /// Paired Wilcoxon signed rank test on two columns of a CSV file.
    Wilcoxon(WilcoxonArgs),
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// JSON benchmark spec; built-in presets and suite when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Restrict to these algorithms (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    algo: Vec<String>,
    /// Restrict to these function labels (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    function: Vec<String>,
    /// Replace the dimension list.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct WilcoxonArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    col_a: String,
    #[arg(long)]
    col_b: String,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Overrides {
    fn spec(&self) -> Result<BenchmarkSpec> {
        let mut spec = match &self.config {
            Some(path) => BenchmarkSpec::load(path)?,
            None => BenchmarkSpec::default(),
        };
        if !self.algo.is_empty() {
            spec.algorithms = self
                .algo
                .iter()
                .map(|name| select_algorithm(&spec, name))
                .collect::<Result<_>>()?;
        }
        if !self.function.is_empty() {
            spec.functions = self
                .function
                .iter()
                .map(|label| {
                    spec.function(label)
                        .cloned()
                        .ok_or_else(|| Error::InvalidConfig(format!("unknown function `{label}`")))
                })
                .collect::<Result<_>>()?;
        }
        if !self.dim.is_empty() {
            spec.dims = self.dim.clone();
        }
        if let Some(b) = self.budget {
            spec.budget = b;
        }
        if let Some(r) = self.reps {
            spec.reps = r;
        }
        if let Some(s) = self.seed {
            spec.master_seed = s;
        }
        if let Some(o) = &self.out {
            spec.output_dir = o.clone();
        }
        Ok(spec)
    }
}

/// Looks the name up in the spec first, then among the presets.
fn select_algorithm(spec: &BenchmarkSpec, name: &str) -> Result<AlgorithmEntry> {
    if let Some(a) = spec.algorithm(name) {
        return Ok(a.clone());
    }
    AlgorithmConfig::preset(name)
        .map(|config| AlgorithmEntry {
            name: name.to_string(),
            config,
        })
        .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{name}`")))
}

fn cmd_run(o: &Overrides) -> Result<()> {
    let mut o = o.clone();
    o.reps = o.reps.or(Some(1));
    let spec = o.spec()?;
    if spec.algorithms.len() != 1 || spec.functions.len() != 1 || spec.dims.len() != 1 {
        return Err(Error::InvalidConfig(
            "run needs exactly one --algo, one --function and one --dim".into(),
        ));
    }
    spec.validate()?;
    let algo = &spec.algorithms[0].name;
    let function = spec.build_function(&spec.functions[0].label, spec.dims[0])?;
    println!("algorithm,function,dim,rep,seed,evals_used,best_fitness");
    for rep in 0..spec.reps {
        let (record, trace) = run_single(&spec, algo, &function, rep)?;
        if o.out.is_some() {
            write_trace(&spec.output_dir.join(&record.trace_path), &trace)?;
        }
        println!(
            "{},{},{},{},{},{},{}",
            record.algorithm,
            record.function,
            record.dim,
            record.rep,
            record.seed,
            record.evals_used,
            record.best_fitness
        );
    }
    Ok(())
}

fn cmd_bench(o: &Overrides) -> Result<()> {
    let spec = o.spec()?;
    let report = run_benchmark(&spec, o.workers)?;
    eprintln!(
        "{} runs ({} executed, {} reused) in {}",
        report.records.len(),
        report.executed,
        report.skipped,
        spec.output_dir.display()
    );
    summarize_dir(&spec.output_dir, spec.budget)
}

fn cmd_rse(o: &Overrides) -> Result<()> {
    let spec = o.spec()?;
    println!("function,dim,category,budget,reps,value");
    for t in rse_targets(&spec, o.workers)? {
        println!(
            "{},{},{},{},{},{}",
            t.function, t.dim, t.category, t.budget, t.reps, t.value
        );
    }
    Ok(())
}

fn cmd_summarize(o: &Overrides) -> Result<()> {
    let out = o.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    let budget = match o.budget {
        Some(b) => b,
        None => BenchmarkSpec::load(&out.join("spec.json"))?.budget,
    };
    summarize_dir(&out, budget)
}

fn summarize_dir(out: &Path, budget: usize) -> Result<()> {
    let runs = load_runs(out)?;
    let targets = read_targets_csv(&out.join("targets.csv"))?;
    let table = summarize(&runs, &targets, budget)?;
    write_summary(out, &table)?;
    let summary = out.join("summary.csv");
    let text = std::fs::read_to_string(&summary).map_err(|e| Error::Io {
        path: summary.clone(),
        source: e,
    })?;
    print!("{text}");
    Ok(())
}

fn cmd_wilcoxon(a: &WilcoxonArgs) -> Result<()> {
    let mut reader = csv::Reader::from_path(&a.file)?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::InvalidConfig(format!("no column `{name}` in {}", a.file.display()))
        })
    };
    let (ia, ib) = (column(&a.col_a)?, column(&a.col_b)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for row in reader.records() {
        let row = row?;
        let parse = |i: usize| -> Result<f64> {
            row[i]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSample(format!("not a number: `{}`", &row[i])))
        };
        xs.push(parse(ia)?);
        ys.push(parse(ib)?);
    }
    let result = wilcoxon_signed_rank(&xs, &ys)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(o) => cmd_run(o),
        Command::Bench(o) => cmd_bench(o),
        Command::Rse(o) => cmd_rse(o),
        Command::Summarize(o) => cmd_summarize(o),
        Command::Wilcoxon(a) => cmd_wilcoxon(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
