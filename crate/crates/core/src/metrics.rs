//! Revenue, Nash welfare and inequality measures.
//!
//! All sums run in a fixed order (re-sellers ascending, then products
//! ascending) so repeated runs produce bit-identical floats.

use std::io::Write;

use serde::Serialize;

use crate::instance::{self, is_feasible_allocation, Allocation, CardinalityBounds, Instance};
use crate::{Error, Result};

/// Nash social welfare in product and log form.
///
/// `log` is `-inf` (and `product` is 0) whenever some re-seller has zero
/// utility. Optimizers compare the log form; the product is kept for
/// reporting and may overflow to `+inf` on large instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NashWelfare {
    pub log: f64,
    pub product: f64,
}

impl NashWelfare {
    pub fn is_positive(&self) -> bool {
        self.log.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub revenue: f64,
    pub nash_log: f64,
    pub nash_product: f64,
    /// Gini over per-re-seller utilities.
    pub gini: f64,
    /// Gini over per-product copy counts.
    pub product_gini: f64,
    pub income_gap: f64,
    pub feasible: bool,
}

/// Total expected revenue `sum_i sum_{j in A_i} W[i][j]`.
pub fn total_revenue(inst: &Instance, alloc: &Allocation) -> f64 {
    instance::utilities(inst, alloc).iter().fold(0.0, |acc, u| acc + u)
}

pub fn nash_welfare(inst: &Instance, alloc: &Allocation) -> NashWelfare {
    nash_from_utilities(&instance::utilities(inst, alloc))
}

pub fn nash_from_utilities(utilities: &[f64]) -> NashWelfare {
    if utilities.iter().any(|&u| u <= 0.0) {
        return NashWelfare { log: f64::NEG_INFINITY, product: 0.0 };
    }
    NashWelfare { log: utilities.iter().map(|u| u.ln()).sum(), product: utilities.iter().product() }
}

/// Gini coefficient `sum_i sum_j |U_i - U_j| / (2 m sum_j U_j)`.
///
/// Zero when every value is zero.
pub fn gini(values: &[f64]) -> Result<f64> {
    if let Some(&v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidParameter(format!("gini input {v} is negative or not finite")));
    }
    let total: f64 = values.iter().sum();
    if values.is_empty() || total == 0.0 {
        return Ok(0.0);
    }
    // sorted form of the pairwise sum: sum_i (2i - m + 1) x_(i)
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let weighted: f64 = sorted.iter().enumerate().map(|(i, x)| (2.0 * i as f64 - m + 1.0) * x).sum();
    Ok((weighted / (m * total)).max(0.0))
}

/// `max - min`; zero for an empty slice.
pub fn income_gap(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// One solver outcome fed to [`violation_percentage`]; `allocation` is
/// `None` when the solver produced nothing.
#[derive(Debug, Clone, Copy)]
pub struct RunOutcome<'a> {
    pub instance: &'a Instance,
    pub bounds: CardinalityBounds,
    pub allocation: Option<&'a Allocation>,
}

/// Percentage of runs whose allocation breaks a bound or that failed
/// outright. An empty list reports 0.
pub fn violation_percentage(results: &[RunOutcome<'_>]) -> f64 {
    if results.is_empty() {
        return 0.0;
    }
    let bad = results
        .iter()
        .filter(|r| match r.allocation {
            None => true,
            Some(a) => !is_feasible_allocation(r.instance, a, &r.bounds).is_feasible(),
        })
        .count();
    100.0 * bad as f64 / results.len() as f64
}

/// Ratio of Nash products `exp(heuristic - optimal)` from log welfare.
pub fn approximation_ratio(heuristic_log: f64, optimal_log: f64) -> Result<f64> {
    if !optimal_log.is_finite() {
        return Err(Error::InvalidParameter(format!("optimal log Nash welfare must be finite, got {optimal_log}")));
    }
    if heuristic_log == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((heuristic_log - optimal_log).exp())
}

pub fn evaluate(inst: &Instance, alloc: &Allocation, bounds: &CardinalityBounds) -> MetricsReport {
    let utilities = instance::utilities(inst, alloc);
    let nash = nash_from_utilities(&utilities);
    let copies: Vec<f64> = alloc.copies(inst.products()).into_iter().map(|c| c as f64).collect();
    MetricsReport {
        revenue: utilities.iter().fold(0.0, |acc, u| acc + u),
        nash_log: nash.log,
        nash_product: nash.product,
        gini: gini(&utilities).expect("utilities are non-negative"),
        product_gini: gini(&copies).expect("copy counts are non-negative"),
        income_gap: income_gap(&utilities),
        feasible: is_feasible_allocation(inst, alloc, bounds).is_feasible(),
    }
}

/// Column order of the per-run report table.
pub const REPORT_HEADER: [&str; 10] = [
    "instance_id",
    "algorithm",
    "revenue",
    "nash_product",
    "nash_log",
    "gini",
    "income_gap",
    "feasible",
    "runtime_ms",
    "seed",
];

/// One row of the report table: one algorithm on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance_id: String,
    pub algorithm: String,
    pub metrics: MetricsReport,
    pub runtime_ms: Option<f64>,
    pub seed: Option<u64>,
}

impl ReportRow {
    fn record(&self) -> [String; 10] {
        let m = &self.metrics;
        [
            self.instance_id.clone(),
            self.algorithm.clone(),
            m.revenue.to_string(),
            m.nash_product.to_string(),
            m.nash_log.to_string(),
            m.gini.to_string(),
            m.income_gap.to_string(),
            m.feasible.to_string(),
            self.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

/// Writes the header and rows sorted by `(instance_id, algorithm)`.
pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut sorted: Vec<&ReportRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.instance_id, &a.algorithm).cmp(&(&b.instance_id, &b.algorithm)));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for row in sorted {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
