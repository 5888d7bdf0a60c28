//! Fair allocation of indivisible products to re-sellers.
//!
//! Every re-seller receives between `l1` and `l2` distinct products and every
//! product is handed to between `r1` and `r2` re-sellers. Within those limits
//! the crate searches for allocations with high Nash social welfare (the
//! product of per-re-seller utilities), audits them for EF1 / EQ1 and reports
//! revenue and inequality metrics.
//!
//! - [`instance`]: instances, bounds, allocations and feasibility analysis
//! - [`metrics`]: revenue, Nash welfare, Gini, income gap, report rows
//! - [`fairness`]: EF1 / EQ1 checks and exhaustive EQ1 existence search
//! - [`algorithms`]: GreedyNash, SeAl, GreedyRevenue, round robin, LPT and
//!   the branch-and-bound Nash oracle
//! - [`milp`]: the piecewise-log NashMax model, LP export and solution import
//! - [`datagen`]: seeded synthetic instances, parameter grids and the
//!   catalog of hand-built instances
//! - [`io`]: instance and allocation file formats

pub mod algorithms;
pub mod datagen;
mod error;
pub mod fairness;
mod flow;
pub mod instance;
pub mod io;
pub mod metrics;
pub mod milp;

pub use error::{Error, Result};
pub use instance::{Allocation, CardinalityBounds, Instance};
