//! `compare`: algorithm quality against the exact oracle, aggregated over
//! many instances.
//!
//! Every (instance, bounds) job runs its algorithms sequentially; jobs run
//! in parallel on a dedicated pool. Rows are sorted before they are written,
//! so the worker count never changes the output.

use std::time::Instant;

use fair_alloc::algorithms::{exact_nash_oracle, Algorithm, AllocationResult, Status};
use fair_alloc::instance::check_feasibility;
use fair_alloc::metrics::{approximation_ratio, evaluate, violation_percentage, RunOutcome};
use fair_alloc::{Allocation, CardinalityBounds};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::source::Loaded;
use crate::{create_dir, dedup, emit, write_text, CompareArgs};

/// One algorithm on one (instance, bounds) job.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub bounds: CardinalityBounds,
    pub algorithm: String,
    pub status: Status,
    pub feasible: bool,
    pub revenue: f64,
    pub nash_log: f64,
    /// Nash product relative to the proven optimum; absent without one or
    /// when this run's allocation is infeasible.
    pub ratio: Option<f64>,
    /// Whether the oracle baseline finished; absent when it was not run.
    pub oracle_exhaustive: Option<bool>,
    /// Percentage of greedy-revenue's revenue lost by this run.
    pub revenue_dip_pct: Option<f64>,
    pub gini: f64,
    pub income_gap: f64,
    pub runtime_ms: Option<f64>,
}

/// Per-algorithm means and minima over all runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub runs: usize,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    /// Runs with a ratio.
    pub ratio_runs: usize,
    /// Runs whose oracle baseline ran out of budget.
    pub oracle_incomplete: usize,
    pub mean_revenue_dip_pct: Option<f64>,
    pub mean_gini: Option<f64>,
    pub mean_income_gap: Option<f64>,
    pub violation_pct: f64,
    pub mean_runtime_ms: Option<f64>,
}

pub const AGGREGATE_HEADER: [&str; 11] = [
    "algorithm",
    "runs",
    "mean_ratio",
    "min_ratio",
    "ratio_runs",
    "oracle_incomplete",
    "mean_revenue_dip_pct",
    "mean_gini",
    "mean_income_gap",
    "violation_pct",
    "mean_runtime_ms",
];

pub const RUNS_HEADER: [&str; 13] = [
    "instance_id",
    "bounds",
    "algorithm",
    "status",
    "feasible",
    "revenue",
    "nash_log",
    "ratio",
    "oracle_exhaustive",
    "revenue_dip_pct",
    "gini",
    "income_gap",
    "runtime_ms",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunRecord {
    fn record(&self) -> [String; 13] {
        [
            self.instance_id.clone(),
            self.bounds.to_string(),
            self.algorithm.clone(),
            self.status.to_string(),
            self.feasible.to_string(),
            self.revenue.to_string(),
            self.nash_log.to_string(),
            opt(self.ratio),
            opt(self.oracle_exhaustive),
            opt(self.revenue_dip_pct),
            self.gini.to_string(),
            self.income_gap.to_string(),
            opt(self.runtime_ms.map(|t| format!("{t:.3}"))),
        ]
    }
}

impl AggregateRow {
    fn record(&self) -> [String; 11] {
        [
            self.algorithm.clone(),
            self.runs.to_string(),
            opt(self.mean_ratio),
            opt(self.min_ratio),
            self.ratio_runs.to_string(),
            self.oracle_incomplete.to_string(),
            opt(self.mean_revenue_dip_pct),
            opt(self.mean_gini),
            opt(self.mean_income_gap),
            self.violation_pct.to_string(),
            opt(self.mean_runtime_ms.map(|t| format!("{t:.3}"))),
        ]
    }
}

/// One instance under one bounds setting.
#[derive(Debug, Clone)]
pub struct Job {
    pub loaded: Loaded,
    pub bounds: CardinalityBounds,
}

struct Timed {
    result: AllocationResult,
    ms: f64,
}

fn timed(f: impl FnOnce() -> AllocationResult) -> Timed {
    let start = Instant::now();
    let result = f();
    Timed { result, ms: start.elapsed().as_secs_f64() * 1e3 }
}

/// A run record with the allocation it was computed from (`None` when the
/// bounds were rejected up front).
#[derive(Debug, Clone)]
pub struct JobRun {
    pub record: RunRecord,
    pub allocation: Option<Allocation>,
}

/// Runs every algorithm on one job, plus the oracle and greedy-revenue
/// baselines they are measured against.
pub fn run_job(job: &Job, algorithms: &[Algorithm], oracle_budget: u64, timing: bool) -> Vec<JobRun> {
    let inst = &job.loaded.instance;
    let b = &job.bounds;
    let feasible_bounds = check_feasibility(inst.resellers(), inst.products(), b).feasible;

    // the oracle baseline doubles as the `oracle` row when one is requested
    let mut oracle_run = None;
    let mut optimum = None;
    let mut oracle_exhaustive = None;
    if oracle_budget > 0 && feasible_bounds {
        let start = Instant::now();
        let r = exact_nash_oracle(inst, b, oracle_budget);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        oracle_exhaustive = Some(r.exhaustive);
        if r.exhaustive && r.best_nash_log.is_finite() {
            optimum = Some(r.best_nash_log);
        }
        let result = match r.best_allocation {
            Some(allocation) => AllocationResult { allocation, trace: Vec::new(), status: Status::Success, ef1: None },
            None => Algorithm::Oracle.run(inst, b, 0),
        };
        oracle_run = Some(Timed { result, ms });
    }
    let baseline = Algorithm::GreedyRevenue.run(inst, b, 0);
    let baseline_revenue =
        (baseline.is_success()).then(|| evaluate(inst, &baseline.allocation, b).revenue).filter(|r| *r > 0.0);

    let mut records = Vec::with_capacity(algorithms.len());
    for &algo in algorithms {
        let run = match (algo, &oracle_run) {
            (Algorithm::Oracle, Some(o)) => Timed { result: o.result.clone(), ms: o.ms },
            _ => timed(|| algo.run(inst, b, oracle_budget)),
        };
        let metrics = evaluate(inst, &run.result.allocation, b);
        let usable = run.result.status != Status::InfeasibleInput && metrics.feasible;
        let record = RunRecord {
            instance_id: job.loaded.id.clone(),
            bounds: *b,
            algorithm: algo.name().to_string(),
            status: run.result.status,
            feasible: metrics.feasible,
            revenue: metrics.revenue,
            nash_log: metrics.nash_log,
            ratio: optimum.filter(|_| usable).and_then(|opt| approximation_ratio(metrics.nash_log, opt).ok()),
            oracle_exhaustive,
            revenue_dip_pct: baseline_revenue.filter(|_| usable).map(|base| 100.0 * (base - metrics.revenue) / base),
            gini: metrics.gini,
            income_gap: metrics.income_gap,
            runtime_ms: timing.then_some(run.ms),
        };
        let allocation = (run.result.status != Status::InfeasibleInput).then_some(run.result.allocation);
        records.push(JobRun { record, allocation });
    }
    records
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Aggregates run records per algorithm. `jobs` supplies the instances the
/// violation percentage is judged on; records must come from those jobs.
pub fn aggregate(jobs: &[Job], records: &[RunRecord], allocations: &[Option<Allocation>]) -> Vec<AggregateRow> {
    let mut names: Vec<&str> = records.iter().map(|r| r.algorithm.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    names
        .into_iter()
        .map(|name| {
            let picked: Vec<usize> = (0..records.len()).filter(|&k| records[k].algorithm == name).collect();
            let of = |f: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<f64> {
                picked.iter().filter_map(|&k| f(&records[k])).collect()
            };
            let ratios = of(&|r| r.ratio);
            let with_allocation = |r: &RunRecord| r.status != Status::InfeasibleInput;
            let outcomes: Vec<RunOutcome<'_>> = picked
                .iter()
                .map(|&k| {
                    let job = jobs
                        .iter()
                        .find(|j| j.loaded.id == records[k].instance_id && j.bounds == records[k].bounds)
                        .expect("record belongs to a job");
                    RunOutcome {
                        instance: &job.loaded.instance,
                        bounds: job.bounds,
                        allocation: allocations[k].as_ref(),
                    }
                })
                .collect();
            AggregateRow {
                algorithm: name.to_string(),
                runs: picked.len(),
                mean_ratio: mean(&ratios),
                min_ratio: ratios.iter().copied().reduce(f64::min),
                ratio_runs: ratios.len(),
                oracle_incomplete: picked.iter().filter(|&&k| records[k].oracle_exhaustive == Some(false)).count(),
                mean_revenue_dip_pct: mean(&of(&|r| r.revenue_dip_pct)),
                mean_gini: mean(&of(&|r| with_allocation(r).then_some(r.gini))),
                mean_income_gap: mean(&of(&|r| with_allocation(r).then_some(r.income_gap))),
                violation_pct: violation_percentage(&outcomes),
                mean_runtime_ms: mean(&of(&|r| r.runtime_ms)),
            }
        })
        .collect()
}

/// Result of a comparison: sorted run records and per-algorithm aggregates.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<AggregateRow>,
}

pub fn compare(
    jobs: &[Job],
    algorithms: &[Algorithm],
    oracle_budget: u64,
    workers: usize,
    timing: bool,
) -> CliResult<Comparison> {
    let algorithms = dedup(algorithms);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    let per_job: Vec<Vec<JobRun>> =
        pool.install(|| jobs.par_iter().map(|job| run_job(job, &algorithms, oracle_budget, timing)).collect());
    let mut all: Vec<JobRun> = per_job.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        let key = |r: &RunRecord| {
            (r.instance_id.clone(), [r.bounds.l1, r.bounds.l2, r.bounds.r1, r.bounds.r2], r.algorithm.clone())
        };
        key(&a.record).cmp(&key(&b.record))
    });
    let (runs, allocations): (Vec<RunRecord>, Vec<Option<Allocation>>) =
        all.into_iter().map(|r| (r.record, r.allocation)).unzip();
    let aggregates = aggregate(jobs, &runs, &allocations);
    Ok(Comparison { runs, aggregates })
}

fn csv_text<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Core(fair_alloc::Error::Csv(e));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| err(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> CliResult<String> {
    csv_text(AGGREGATE_HEADER, rows.iter().map(AggregateRow::record))
}

pub fn runs_csv(rows: &[RunRecord]) -> CliResult<String> {
    csv_text(RUNS_HEADER, rows.iter().map(RunRecord::record))
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let mut jobs = Vec::new();
    for loaded in args.sources.load(args.seed)? {
        for bounds in args.bounds.all_for(&loaded)? {
            jobs.push(Job { loaded: loaded.clone(), bounds });
        }
    }
    let result = compare(&jobs, &args.algo, args.oracle_budget, args.workers, args.timing)?;
    let summary = aggregate_csv(&result.aggregates)?;
    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            write_text(&dir.join("compare.csv"), &summary)?;
            write_text(&dir.join("runs.csv"), &runs_csv(&result.runs)?)
        }
        None => emit(&summary),
    }
}
