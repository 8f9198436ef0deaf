//! Per-cell ERT, per-category means with significance against the best
//! algorithm, and mean/median normalized best-value curves.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::RunTrace;
use crate::metrics::{expected_running_time, ErtResult};
use crate::stats::wilcoxon_signed_rank;

use super::io::{csv_bytes, csv_bytes_with_header, write_atomic, TargetRecord};
use super::runner::{audit_budget, RunRecord};

/// Spacing of the common evaluation grid for averaged curves.
pub const BNFV_GRID_STEP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellErt {
    pub algorithm: String,
    pub function: String,
    pub dim: usize,
    pub category: u8,
    pub target: f64,
    pub ert: ErtResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// `"1"`..`"4"`, or `"all"` for the overall row.
    pub category: String,
    pub dim: usize,
    pub algorithm: String,
    pub mean_ert: f64,
    /// At least one contributing cell is a lower bound, so the true mean is larger.
    pub lower_bound: bool,
    /// Wilcoxon p-value of paired per-function ERTs against the best algorithm
    /// of the row group; absent for the best algorithm itself.
    pub p_vs_best: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BnfvCurve {
    pub algorithm: String,
    pub function: String,
    pub dim: usize,
    /// False when the target is zero and raw best values are reported.
    pub normalized: bool,
    /// `(eval, mean, median)` across repetitions.
    pub points: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub cells: Vec<CellErt>,
    pub rows: Vec<SummaryRow>,
    pub curves: Vec<BnfvCurve>,
}

fn first_seen<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

pub fn summarize(
    runs: &[(RunRecord, RunTrace)],
    targets: &[TargetRecord],
    budget: usize,
) -> Result<SummaryTable> {
    if runs.is_empty() {
        return Err(Error::InvalidConfig("no run records to summarize".into()));
    }
    let records: Vec<RunRecord> = runs.iter().map(|(r, _)| r.clone()).collect();
    audit_budget(&records, budget)?;

    let algorithms = first_seen(runs.iter().map(|(r, _)| r.algorithm.as_str()));
    let functions = first_seen(runs.iter().map(|(r, _)| r.function.as_str()));
    let mut dims: Vec<usize> = Vec::new();
    for (r, _) in runs {
        if !dims.contains(&r.dim) {
            dims.push(r.dim);
        }
    }
    let target_of: HashMap<(&str, usize), &TargetRecord> = targets
        .iter()
        .map(|t| ((t.function.as_str(), t.dim), t))
        .collect();

    let mut grouped: HashMap<(&str, &str, usize), Vec<&RunTrace>> = HashMap::new();
    for (r, t) in runs {
        grouped
            .entry((r.algorithm.as_str(), r.function.as_str(), r.dim))
            .or_default()
            .push(t);
    }

    let mut cells = Vec::new();
    let mut curves = Vec::new();
    for a in &algorithms {
        for f in &functions {
            for &d in &dims {
                let Some(traces) = grouped.get(&(a.as_str(), f.as_str(), d)) else {
                    continue;
                };
                let target = target_of.get(&(f.as_str(), d)).ok_or_else(|| {
                    Error::InvalidConfig(format!("no random-sampling target for {f} (d={d})"))
                })?;
                let owned: Vec<RunTrace> = traces.iter().map(|t| (*t).clone()).collect();
                cells.push(CellErt {
                    algorithm: a.clone(),
                    function: f.clone(),
                    dim: d,
                    category: target.category,
                    target: target.value,
                    ert: expected_running_time(&owned, target.value, budget),
                });
                curves.push(mean_curve(a, f, d, traces, target.value, budget));
            }
        }
    }

    let mut rows = Vec::new();
    for &d in &dims {
        let mut categories: Vec<u8> = cells
            .iter()
            .filter(|c| c.dim == d)
            .map(|c| c.category)
            .collect();
        categories.sort_unstable();
        categories.dedup();
        let mut groups: Vec<(String, Option<u8>)> = categories
            .iter()
            .map(|c| (c.to_string(), Some(*c)))
            .collect();
        groups.push(("all".into(), None));
        for (name, cat) in groups {
            rows.extend(category_rows(&cells, &algorithms, d, &name, cat));
        }
    }

    Ok(SummaryTable {
        cells,
        rows,
        curves,
    })
}

fn category_rows(
    cells: &[CellErt],
    algorithms: &[String],
    dim: usize,
    name: &str,
    category: Option<u8>,
) -> Vec<SummaryRow> {
    let in_group = |c: &&CellErt| c.dim == dim && category.is_none_or(|k| c.category == k);
    let per_algo: Vec<(&String, Vec<&CellErt>)> = algorithms
        .iter()
        .map(|a| {
            (
                a,
                cells
                    .iter()
                    .filter(in_group)
                    .filter(|c| &c.algorithm == a)
                    .collect(),
            )
        })
        .filter(|(_, cs): &(&String, Vec<&CellErt>)| !cs.is_empty())
        .collect();

    let mut rows: Vec<SummaryRow> = per_algo
        .iter()
        .map(|(a, cs)| SummaryRow {
            category: name.to_string(),
            dim,
            algorithm: (*a).clone(),
            mean_ert: cs.iter().map(|c| c.ert.value.value()).sum::<f64>() / cs.len() as f64,
            lower_bound: cs.iter().any(|c| c.ert.value.is_lower_bound()),
            p_vs_best: None,
        })
        .collect();
    if rows.len() < 2 {
        return rows;
    }

    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.mean_ert < rows[best].mean_ert {
            best = i;
        }
    }
    let best_cells: HashMap<&str, f64> = per_algo[best]
        .1
        .iter()
        .map(|c| (c.function.as_str(), c.ert.value.value()))
        .collect();
    for (i, (_, cs)) in per_algo.iter().enumerate() {
        if i == best {
            continue;
        }
        let (mine, theirs): (Vec<f64>, Vec<f64>) = cs
            .iter()
            .filter_map(|c| {
                best_cells
                    .get(c.function.as_str())
                    .map(|b| (c.ert.value.value(), *b))
            })
            .unzip();
        rows[i].p_vs_best = wilcoxon_signed_rank(&mine, &theirs).ok().map(|w| w.p_value);
    }
    rows
}

fn mean_curve(
    algorithm: &str,
    function: &str,
    dim: usize,
    traces: &[&RunTrace],
    target: f64,
    budget: usize,
) -> BnfvCurve {
    let normalized = target != 0.0;
    let scale = if normalized { target } else { 1.0 };
    let mut grid: Vec<usize> = (BNFV_GRID_STEP..=budget).step_by(BNFV_GRID_STEP).collect();
    if grid.last() != Some(&budget) {
        grid.push(budget);
    }
    let points = grid
        .into_iter()
        .filter_map(|e| {
            let mut values: Vec<f64> = traces
                .iter()
                .filter_map(|t| t.best_at(e))
                .map(|v| v / scale)
                .collect();
            if values.is_empty() {
                return None;
            }
            values.sort_by(f64::total_cmp);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let n = values.len();
            let median = if n % 2 == 1 {
                values[n / 2]
            } else {
                0.5 * (values[n / 2 - 1] + values[n / 2])
            };
            Some((e, mean, median))
        })
        .collect();
    BnfvCurve {
        algorithm: algorithm.to_string(),
        function: function.to_string(),
        dim,
        normalized,
        points,
    }
}

#[derive(Serialize)]
struct ErtRow<'a> {
    algorithm: &'a str,
    function: &'a str,
    dim: usize,
    ert: f64,
    lower_bound: bool,
    success_rate: f64,
}

#[derive(Serialize)]
struct SummaryCsvRow<'a> {
    category: &'a str,
    dim: usize,
    algorithm: &'a str,
    mean_ert: f64,
    flag: &'a str,
    p_vs_best: Option<f64>,
}

#[derive(Serialize)]
struct CurveRow {
    eval: usize,
    mean: f64,
    median: f64,
}

/// Writes `ert.csv`, `summary.csv`, `summary.json` and one curve file per cell
/// under `bnfv/` (or `bfv/` when the target is zero).
pub fn write_summary(out: &Path, table: &SummaryTable) -> Result<()> {
    let ert_rows: Vec<ErtRow> = table
        .cells
        .iter()
        .map(|c| ErtRow {
            algorithm: &c.algorithm,
            function: &c.function,
            dim: c.dim,
            ert: c.ert.value.value(),
            lower_bound: c.ert.value.is_lower_bound(),
            success_rate: c.ert.success_rate,
        })
        .collect();
    write_atomic(&out.join("ert.csv"), &csv_bytes(&ert_rows)?)?;

    let summary_rows: Vec<SummaryCsvRow> = table
        .rows
        .iter()
        .map(|r| SummaryCsvRow {
            category: &r.category,
            dim: r.dim,
            algorithm: &r.algorithm,
            mean_ert: r.mean_ert,
            flag: if r.lower_bound { ">" } else { "" },
            p_vs_best: r.p_vs_best,
        })
        .collect();
    write_atomic(&out.join("summary.csv"), &csv_bytes(&summary_rows)?)?;
    write_atomic(
        &out.join("summary.json"),
        serde_json::to_string_pretty(table)?.as_bytes(),
    )?;

    for c in &table.curves {
        let rows: Vec<CurveRow> = c
            .points
            .iter()
            .map(|&(eval, mean, median)| CurveRow { eval, mean, median })
            .collect();
        let dir = if c.normalized { "bnfv" } else { "bfv" };
        let path = out
            .join(dir)
            .join(format!("{}__{}__d{}.csv", c.algorithm, c.function, c.dim));
        write_atomic(
            &path,
            &csv_bytes_with_header(&["eval", "mean", "median"], &rows)?,
        )?;
    }
    Ok(())
}
