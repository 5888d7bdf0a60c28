//! `bench`: wall-clock scaling of the algorithms on square instances.

use std::time::Instant;

use fair_alloc::algorithms::{exact_nash_oracle, Algorithm, Status};
use fair_alloc::datagen::{generate_synthetic, grid_entry, GenSpec, UpperCopies};
use fair_alloc::CardinalityBounds;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::{create_dir, dedup, emit, write_text, BenchArgs};

pub const BENCH_HEADER: [&str; 7] = ["size", "algorithm", "bounds", "median_ms", "samples", "status", "exhaustive"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    /// `m = n`.
    pub size: usize,
    pub algorithm: String,
    pub bounds: CardinalityBounds,
    pub median_ms: f64,
    pub samples: usize,
    pub status: Status,
    /// Oracle rows only: whether the search finished within its budget.
    pub exhaustive: Option<bool>,
}

/// Bounds used when none are given: `l = 5`, `epsilon = 3`, every product
/// needs its fair share of copies and may go to every re-seller.
pub fn default_bounds(size: usize) -> CardinalityBounds {
    grid_entry(size, size, 5, 3, 1.0, UpperCopies::AllResellers).bounds
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        (samples[k / 2 - 1] + samples[k / 2]) / 2.0
    }
}

/// Times each algorithm `repeats` times per size on a fresh synthetic
/// instance. Sizes must be non-empty, positive and strictly ascending.
pub fn bench(
    sizes: &[usize],
    algorithms: &[Algorithm],
    bounds: Option<CardinalityBounds>,
    repeats: usize,
    seed: u64,
    oracle_budget: u64,
) -> CliResult<Vec<BenchRow>> {
    if sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one size".into()));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!("--sizes must be positive and ascending, got {sizes:?}")));
    }
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &size in sizes {
        let inst = generate_synthetic(&GenSpec::new(size, size, seed))?;
        let b = bounds.unwrap_or_else(|| default_bounds(size));
        for algo in dedup(algorithms) {
            let mut samples = Vec::with_capacity(repeats);
            let mut status = Status::Success;
            let mut exhaustive = None;
            for _ in 0..repeats {
                let start = Instant::now();
                if algo == Algorithm::Oracle {
                    let r = exact_nash_oracle(&inst, &b, oracle_budget);
                    exhaustive = Some(r.exhaustive);
                    status = if r.best_allocation.is_some() { Status::Success } else { Status::RepairIncomplete };
                } else {
                    status = algo.run(&inst, &b, oracle_budget).status;
                }
                samples.push(start.elapsed().as_secs_f64() * 1e3);
            }
            rows.push(BenchRow {
                size,
                algorithm: algo.name().to_string(),
                bounds: b,
                median_ms: median(&mut samples),
                samples: repeats,
                status,
                exhaustive,
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Core(fair_alloc::Error::Csv(e));
    w.write_record(BENCH_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.size.to_string(),
            r.algorithm.clone(),
            r.bounds.to_string(),
            format!("{:.3}", r.median_ms),
            r.samples.to_string(),
            r.status.to_string(),
            r.exhaustive.map(|e| e.to_string()).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| err(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let rows = bench(&args.sizes, &args.algo, args.bounds, args.repeats, args.seed, args.oracle_budget)?;
    let text = bench_csv(&rows)?;
    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            write_text(&dir.join("bench.csv"), &text)
        }
        None => emit(&text),
    }
}
