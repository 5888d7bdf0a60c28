//! Allocation procedures.
//!
//! Every heuristic here is deterministic: ties between re-sellers, products
//! or swap candidates always go to the lowest index, and comparisons are
//! exact floating-point comparisons.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::fairness::FairnessVerdict;
use crate::instance::{check_feasibility, is_feasible_allocation, Allocation, CardinalityBounds, Instance};
use crate::{Error, Result};

mod augment;
mod greedy_nash;
mod greedy_revenue;
mod lpt;
mod oracle;
mod replacement;
mod round_robin;
mod seal;
pub(crate) mod search;

pub use greedy_nash::{greedy_nash, uncons_greedy_nash};
pub use greedy_revenue::greedy_revenue;
pub use lpt::lpt_allocate;
pub use oracle::{exact_nash_oracle, OracleResult};
pub use replacement::greedy_replacement;
pub use round_robin::round_robin;
pub use seal::seal;

/// Default node budget for the exact oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    First,
    Greedy,
    Fill,
    ReplaceOut,
    ReplaceIn,
    Upper,
    Round,
    Revenue,
    Lpt,
    AugmentOut,
    AugmentIn,
}

impl Phase {
    /// Whether the event takes a product away rather than handing one out.
    pub fn is_removal(&self) -> bool {
        matches!(self, Phase::ReplaceOut | Phase::AugmentOut)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::First => "first",
            Phase::Greedy => "greedy",
            Phase::Fill => "fill",
            Phase::ReplaceOut => "replace-out",
            Phase::ReplaceIn => "replace-in",
            Phase::Upper => "upper",
            Phase::Round => "round",
            Phase::Revenue => "revenue",
            Phase::Lpt => "lpt",
            Phase::AugmentOut => "augment-out",
            Phase::AugmentIn => "augment-in",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One assignment (or removal, for `replace-out`) made by a heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEvent {
    pub phase: Phase,
    pub reseller: usize,
    pub product: usize,
    pub utility_after: f64,
}

impl fmt::Display for TraceEvent {
    /// `phase,reseller,product,utility_after`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.phase, self.reseller, self.product, self.utility_after)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    RepairIncomplete,
    InfeasibleInput,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Success => "success",
            Status::RepairIncomplete => "repair-incomplete",
            Status::InfeasibleInput => "infeasible-input",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub allocation: Allocation,
    pub trace: Vec<TraceEvent>,
    pub status: Status,
    /// EF1 verdict of the result, filled in by round robin.
    pub ef1: Option<FairnessVerdict>,
}

impl AllocationResult {
    pub(crate) fn infeasible_input(m: usize) -> Self {
        AllocationResult {
            allocation: Allocation::empty(m),
            trace: Vec::new(),
            status: Status::InfeasibleInput,
            ef1: None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == Status::Success
    }

    /// Trace as `phase,reseller,product,utility_after` lines.
    pub fn trace_lines(&self) -> String {
        self.trace.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Registered algorithm names, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    GreedyNash,
    Seal,
    GreedyRevenue,
    RoundRobin,
    Lpt,
    UnconsGreedyNash,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::GreedyNash,
        Algorithm::Seal,
        Algorithm::GreedyRevenue,
        Algorithm::RoundRobin,
        Algorithm::Lpt,
        Algorithm::UnconsGreedyNash,
        Algorithm::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::GreedyNash => "greedy-nash",
            Algorithm::Seal => "seal",
            Algorithm::GreedyRevenue => "greedy-revenue",
            Algorithm::RoundRobin => "round-robin",
            Algorithm::Lpt => "lpt",
            Algorithm::UnconsGreedyNash => "uncons-greedy-nash",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Whether the algorithm enforces the re-seller side bounds.
    pub fn enforces_reseller_bounds(&self) -> bool {
        !matches!(self, Algorithm::Lpt | Algorithm::UnconsGreedyNash)
    }

    /// Runs the algorithm. Round robin uses the identity order; the oracle
    /// is limited to `oracle_budget` nodes and reports `repair-incomplete`
    /// when the budget stops it before any feasible allocation is found.
    pub fn run(&self, inst: &Instance, b: &CardinalityBounds, oracle_budget: u64) -> AllocationResult {
        match self {
            Algorithm::GreedyNash => greedy_nash(inst, b),
            Algorithm::Seal => seal(inst, b),
            Algorithm::GreedyRevenue => greedy_revenue(inst, b),
            Algorithm::RoundRobin => {
                let order: Vec<usize> = (0..inst.resellers()).collect();
                round_robin(inst, b, &order).expect("identity order is a permutation")
            }
            Algorithm::Lpt => lpt_allocate(inst, b),
            Algorithm::UnconsGreedyNash => uncons_greedy_nash(inst, b),
            Algorithm::Oracle => {
                if !check_feasibility(inst.resellers(), inst.products(), b).feasible {
                    return AllocationResult::infeasible_input(inst.resellers());
                }
                let r = exact_nash_oracle(inst, b, oracle_budget);
                match r.best_allocation {
                    Some(allocation) => {
                        AllocationResult { allocation, trace: Vec::new(), status: Status::Success, ef1: None }
                    }
                    None => AllocationResult {
                        allocation: Allocation::empty(inst.resellers()),
                        trace: Vec::new(),
                        status: Status::RepairIncomplete,
                        ef1: None,
                    },
                }
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Algorithm::ALL.iter().map(Algorithm::name).collect();
            Error::InvalidParameter(format!("unknown algorithm `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// Multiplicative Nash gain of adding a product worth `w` to a bundle worth
/// `u`. A zero-utility bundle gains without bound; such gains rank above
/// every finite one and among themselves by `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Gain {
    Finite(f64),
    Unbounded(f64),
}

impl Gain {
    pub fn of(u: f64, w: f64) -> Self {
        if u > 0.0 {
            Gain::Finite((u + w) / u)
        } else {
            Gain::Unbounded(w)
        }
    }

    pub fn beats(&self, other: &Gain) -> bool {
        match (self, other) {
            (Gain::Unbounded(a), Gain::Unbounded(b)) | (Gain::Finite(a), Gain::Finite(b)) => a > b,
            (Gain::Unbounded(_), Gain::Finite(_)) => true,
            (Gain::Finite(_), Gain::Unbounded(_)) => false,
        }
    }
}

/// Mutable allocation plus the bookkeeping every heuristic needs.
pub(crate) struct Builder<'a> {
    pub inst: &'a Instance,
    pub bounds: CardinalityBounds,
    pub alloc: Allocation,
    pub copies: Vec<usize>,
    pub utils: Vec<f64>,
    pub trace: Vec<TraceEvent>,
    /// Products of each re-seller, best first (ties by index).
    prefs: Vec<Vec<usize>>,
}

impl<'a> Builder<'a> {
    pub fn new(inst: &'a Instance, bounds: CardinalityBounds) -> Self {
        Self::from_allocation(inst, bounds, Allocation::empty(inst.resellers()))
    }

    pub fn from_allocation(inst: &'a Instance, bounds: CardinalityBounds, alloc: Allocation) -> Self {
        let n = inst.products();
        let prefs = (0..inst.resellers())
            .map(|i| {
                let row = inst.row(i);
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
                order
            })
            .collect();
        let copies = alloc.copies(n);
        let utils = (0..inst.resellers()).map(|i| inst.bundle_value(i, alloc.bundle(i))).collect();
        Builder { inst, bounds, alloc, copies, utils, trace: Vec::new(), prefs }
    }

    pub fn m(&self) -> usize {
        self.inst.resellers()
    }

    pub fn n(&self) -> usize {
        self.inst.products()
    }

    pub fn size(&self, i: usize) -> usize {
        self.alloc.bundle(i).len()
    }

    pub fn assign(&mut self, i: usize, j: usize, phase: Phase) {
        let inserted = self.alloc.insert(i, j);
        debug_assert!(inserted, "product {j} already held by {i}");
        self.copies[j] += 1;
        self.refresh(i);
        self.trace.push(TraceEvent { phase, reseller: i, product: j, utility_after: self.utils[i] });
    }

    pub fn unassign(&mut self, i: usize, j: usize, phase: Phase) {
        let removed = self.alloc.remove(i, j);
        debug_assert!(removed, "product {j} not held by {i}");
        self.copies[j] -= 1;
        self.refresh(i);
        self.trace.push(TraceEvent { phase, reseller: i, product: j, utility_after: self.utils[i] });
    }

    /// Replaces product `out` with `inn` in the bundle of `i`.
    pub fn swap(&mut self, i: usize, out: usize, inn: usize) {
        self.unassign(i, out, Phase::ReplaceOut);
        self.assign(i, inn, Phase::ReplaceIn);
    }

    fn refresh(&mut self, i: usize) {
        self.utils[i] = self.inst.bundle_value(i, self.alloc.bundle(i));
    }

    /// Most preferred product not yet held by `i` that passes `allowed`.
    pub fn most_preferred(&self, i: usize, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        self.prefs[i].iter().copied().find(|&j| !self.alloc.contains(i, j) && allowed(j))
    }

    /// Re-seller with the largest Nash gain for product `j` among those not
    /// holding it and below `cap` products.
    pub fn best_gain(&self, j: usize, cap: usize) -> Option<usize> {
        let mut best: Option<(usize, Gain)> = None;
        for i in 0..self.m() {
            if self.alloc.contains(i, j) || self.size(i) >= cap {
                continue;
            }
            let g = Gain::of(self.utils[i], self.inst.weight(i, j));
            if best.as_ref().is_none_or(|(_, bg)| g.beats(bg)) {
                best = Some((i, g));
            }
        }
        best.map(|(i, _)| i)
    }

    /// For each product in index order, hands out copies to the best-gain
    /// re-seller until `target` copies exist or no re-seller below `cap` is
    /// left.
    pub fn greedy_pass(&mut self, target: usize, cap: usize, phase: Phase) {
        let limit = target.min(self.bounds.r2);
        for j in 0..self.n() {
            while self.copies[j] < limit {
                match self.best_gain(j, cap) {
                    Some(i) => self.assign(i, j, phase),
                    None => break,
                }
            }
        }
    }

    /// Tops every bundle up to `l1` with the owner's favourite products that
    /// still have fewer than `r2` copies.
    pub fn fill_to_lower(&mut self) {
        let (l1, r2) = (self.bounds.l1, self.bounds.r2);
        for i in 0..self.m() {
            while self.size(i) < l1 {
                let copies = &self.copies;
                match self.most_preferred(i, |j| copies[j] < r2) {
                    Some(j) => self.assign(i, j, Phase::Fill),
                    None => break,
                }
            }
        }
    }

    /// Re-sellers ordered by current utility, lowest first, ties by index.
    pub fn poorest_first(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.m()).collect();
        order.sort_by(|&a, &b| self.utils[a].total_cmp(&self.utils[b]).then(a.cmp(&b)));
        order
    }

    pub fn finish(self, check: &CardinalityBounds) -> AllocationResult {
        let ok = is_feasible_allocation(self.inst, &self.alloc, check).is_feasible();
        AllocationResult {
            allocation: self.alloc,
            trace: self.trace,
            status: if ok { Status::Success } else { Status::RepairIncomplete },
            ef1: None,
        }
    }
}
