//! Multi-seed parameter sweeps.
//!
//! A plan is a list of cells (field assignments over a base config) times a
//! replicate count. Every run gets its own seed derived from the base seed,
//! the cell index and the replicate index, so results do not depend on
//! scheduling.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{MavError, Result};
use crate::harness::analysis::{self, quartiles};
use crate::harness::config::ExperimentSpec;
use crate::harness::timeseries::write_timeseries;
use crate::idea::BodyPart;
use crate::rng::derive_seed;
use crate::society::{run, MetricsRecord, SocietyConfig};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "cell_params,metric,median,q1,q3,n";
/// Iterations at which mean and best fitness are summarized.
pub const CHECKPOINTS: [usize; 4] = [10, 20, 50, 100];

/// One point of a sweep: field assignments applied over the base config.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub assignments: Vec<(String, String)>,
}

impl Cell {
    pub fn new<K: Into<String>, V: Into<String>>(
        assignments: impl IntoIterator<Item = (K, V)>,
    ) -> Self {
        Cell {
            assignments: assignments
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }

    /// `field=value` pairs joined by `;`.
    pub fn label(&self) -> String {
        if self.assignments.is_empty() {
            return "base".to_string();
        }
        self.assignments
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn apply(&self, base: &SocietyConfig) -> Result<SocietyConfig> {
        let mut config = base.clone();
        for (k, v) in &self.assignments {
            config
                .set_field(k, v)
                .map_err(|m| MavError::Config(format!("cell `{}`: {k}: {m}", self.label())))?;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Cartesian product of the swept values, first field varying slowest.
pub fn cartesian_cells(sweep_params: &[(String, Vec<String>)]) -> Vec<Cell> {
    sweep_params.iter().fold(
        vec![Cell {
            assignments: vec![],
        }],
        |acc, (field, values)| {
            acc.iter()
                .flat_map(|cell| {
                    values.iter().map(move |v| {
                        let mut next = cell.clone();
                        next.assignments.push((field.clone(), v.clone()));
                        next
                    })
                })
                .collect()
        },
    )
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub replicate: usize,
    pub config: SocietyConfig,
    pub records: Vec<MetricsRecord>,
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub cell: Cell,
    pub runs: Vec<RunResult>,
}

impl CellResult {
    pub fn agents(&self) -> usize {
        self.runs.first().map_or(0, |r| r.config.agent_count())
    }

    /// One value per replicate, in replicate order.
    pub fn per_run(&self, metric: impl Fn(&RunResult) -> f64) -> Vec<f64> {
        self.runs.iter().map(metric).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Serial,
    Parallel,
}

/// Runs every cell `replicates` times.
pub fn run_plan(
    base: &SocietyConfig,
    cells: &[Cell],
    replicates: usize,
    schedule: Schedule,
) -> Result<Vec<CellResult>> {
    let mut jobs = Vec::with_capacity(cells.len() * replicates);
    for (ci, cell) in cells.iter().enumerate() {
        let cell_config = cell.apply(base)?;
        for replicate in 0..replicates {
            let mut config = cell_config.clone();
            config.seed = derive_seed(base.seed, &[ci as u64, replicate as u64]);
            jobs.push((ci, replicate, config));
        }
    }
    let execute = |(ci, replicate, config): &(usize, usize, SocietyConfig)| {
        run(config).map(|records| {
            (
                *ci,
                RunResult {
                    replicate: *replicate,
                    config: config.clone(),
                    records,
                },
            )
        })
    };
    let finished: Vec<(usize, RunResult)> = match schedule {
        Schedule::Serial => jobs.iter().map(execute).collect::<Result<_>>()?,
        Schedule::Parallel => jobs.par_iter().map(execute).collect::<Result<_>>()?,
    };
    let mut results: Vec<CellResult> = cells
        .iter()
        .map(|cell| CellResult {
            cell: cell.clone(),
            runs: Vec::with_capacity(replicates),
        })
        .collect();
    for (ci, run) in finished {
        results[ci].runs.push(run);
    }
    for r in &mut results {
        r.runs.sort_by_key(|run| run.replicate);
    }
    Ok(results)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub cell_params: String,
    pub metric: String,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub n: usize,
}

fn or_inf(v: Option<usize>) -> f64 {
    v.map_or(f64::INFINITY, |x| x as f64)
}

fn at(records: &[MetricsRecord], iteration: usize) -> Option<&MetricsRecord> {
    records.get(iteration).filter(|r| r.iteration == iteration)
}

/// Per-run checkpoint statistics as `(metric, value)` pairs. Iterations that
/// never happened are reported as infinity.
pub fn run_metrics(run: &RunResult) -> Vec<(String, f64)> {
    let rec = &run.records;
    let agents = run.config.agent_count();
    let mut out = vec![
        (
            "convergence_iteration".to_string(),
            or_inf(analysis::convergence_iteration(rec, agents)),
        ),
        (
            "first_optimum_iteration".to_string(),
            or_inf(
                rec.iter()
                    .find(|r| r.optimal_count > 0)
                    .map(|r| r.iteration),
            ),
        ),
        (
            "stabilized_diversity".to_string(),
            analysis::stabilized_diversity(rec) as f64,
        ),
    ];
    for cp in CHECKPOINTS {
        if let Some(r) = at(rec, cp) {
            out.push((format!("mean_fitness_at_{cp}"), r.mean_fitness));
            out.push((format!("max_fitness_at_{cp}"), r.max_fitness_current));
        }
    }
    if let Some(last) = rec.last() {
        out.push(("final_mean_fitness".to_string(), last.mean_fitness));
        out.push((
            "final_max_fitness_so_far".to_string(),
            last.max_fitness_so_far,
        ));
    }
    for (part, settled) in BodyPart::ALL.iter().zip(analysis::locus_stabilization(rec)) {
        out.push((
            format!("stabilization_{}", part.short_name()),
            or_inf(settled),
        ));
    }
    out
}

pub fn summarize(results: &[CellResult]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for cell in results {
        let per_run: Vec<Vec<(String, f64)>> = cell.runs.iter().map(run_metrics).collect();
        let Some(first) = per_run.first() else {
            continue;
        };
        for (m, (name, _)) in first.iter().enumerate() {
            let values: Vec<f64> = per_run.iter().map(|metrics| metrics[m].1).collect();
            let q = quartiles(&values);
            rows.push(SummaryRow {
                cell_params: cell.cell.label(),
                metric: name.clone(),
                median: q.median,
                q1: q.q1,
                q3: q.q3,
                n: q.n,
            });
        }
    }
    rows
}

fn fmt_stat(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        "inf".to_string()
    }
}

pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.cell_params,
            r.metric,
            fmt_stat(r.median),
            fmt_stat(r.q1),
            fmt_stat(r.q3),
            r.n
        );
    }
    out
}

pub fn run_file_name(cell_index: usize, replicate: usize) -> String {
    format!("cell{cell_index:03}_rep{replicate:03}.csv")
}

/// Writes every run's time series and the summary into `dir`.
pub fn write_outputs(
    dir: &Path,
    results: &[CellResult],
    rows: &[SummaryRow],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| MavError::io(dir, e))?;
    let mut written = Vec::new();
    for (ci, cell) in results.iter().enumerate() {
        for run in &cell.runs {
            let path = dir.join(run_file_name(ci, run.replicate));
            write_timeseries(&run.records, &run.config, &path)?;
            written.push(path);
        }
    }
    let summary = dir.join(SUMMARY_FILE);
    std::fs::write(&summary, render_summary(rows)).map_err(|e| MavError::io(&summary, e))?;
    written.push(summary);
    Ok(written)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub results: Vec<CellResult>,
    pub summary: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

/// Runs a plan and writes its outputs.
pub fn execute_plan(
    base: &SocietyConfig,
    cells: &[Cell],
    replicates: usize,
    out_dir: &Path,
    schedule: Schedule,
) -> Result<SweepReport> {
    let results = run_plan(base, cells, replicates, schedule)?;
    let summary = summarize(&results);
    let files = write_outputs(out_dir, &results, &summary)?;
    Ok(SweepReport {
        results,
        summary,
        files,
    })
}

/// Runs an experiment file's sweep into `out_dir` (or the file's own
/// `output_dir` when `out_dir` is `None`).
pub fn sweep(spec: &ExperimentSpec, out_dir: Option<&Path>) -> Result<SweepReport> {
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| spec.output_dir.clone())
        .ok_or_else(|| MavError::Config("no output directory given".into()))?;
    let cells = cartesian_cells(&spec.sweep_params);
    execute_plan(
        &spec.base,
        &cells,
        spec.replicates,
        &dir,
        Schedule::Parallel,
    )
}
