//! Exact Nash-welfare maximisation by branch and bound.
//!
//! The walk is the same product-major enumeration used by the EQ1 search.
//! At every node each re-seller gets an optimistic value: its current
//! utility plus the best products it could still receive, as many as its
//! remaining room allows. The sum of their logarithms bounds every leaf
//! below the node. A second bound caps the total utility still reachable
//! (each remaining product's best copies) and spreads it as evenly as the
//! per-re-seller values allow. Heuristic results seed the incumbent so large parts of
//! the tree are cut before the first leaf is reached.

use super::search::{Decision, PairSearch, SearchHooks, SearchState};
use super::{greedy_nash, seal};
use crate::instance::{Allocation, CardinalityBounds, Instance};
use crate::metrics::nash_welfare;

/// Above this many table entries the optimistic sums are computed by
/// scanning instead of from a precomputed table.
const TABLE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Best feasible allocation found; the first optimum in search order.
    pub best_allocation: Option<Allocation>,
    /// `ln` of its Nash product (`-inf` when some utility is zero or nothing
    /// was found).
    pub best_nash_log: f64,
    pub nodes_expanded: u64,
    /// True when the search finished, so the result is a proven optimum.
    pub exhaustive: bool,
}

/// Sum of the `k` largest values of `row[from..]`.
enum TopSums {
    Table { n: usize, k: usize, sums: Vec<f64> },
    Scan,
}

impl TopSums {
    fn new(inst: &Instance, k: usize) -> Self {
        let (m, n) = (inst.resellers(), inst.products());
        let entries = m.saturating_mul(n + 1).saturating_mul(k + 1);
        if entries > TABLE_LIMIT {
            return TopSums::Scan;
        }
        let mut sums = vec![0.0; entries];
        for i in 0..m {
            let row = inst.row(i);
            for from in 0..=n {
                let mut tail = row[from..].to_vec();
                tail.sort_by(|a, b| b.total_cmp(a));
                let base = (i * (n + 1) + from) * (k + 1);
                let mut acc = 0.0;
                for (t, slot) in sums[base..base + k + 1].iter_mut().enumerate() {
                    *slot = acc;
                    if let Some(v) = tail.get(t) {
                        acc += v;
                    }
                }
            }
        }
        TopSums::Table { n, k, sums }
    }

    fn get(&self, inst: &Instance, i: usize, from: usize, take: usize) -> f64 {
        match self {
            TopSums::Table { n, k, sums } => sums[(i * (n + 1) + from) * (k + 1) + take.min(*k)],
            TopSums::Scan => {
                let mut tail = inst.row(i)[from..].to_vec();
                if take == 0 || tail.is_empty() {
                    return 0.0;
                }
                let take = take.min(tail.len());
                tail.select_nth_unstable_by(take - 1, |a, b| b.total_cmp(a));
                tail[..take].iter().sum()
            }
        }
    }
}

/// `sums[j][k]`: the `k` largest values of column `j`, summed.
struct ColumnTops {
    k: usize,
    sums: Vec<f64>,
    /// `suffix[j]`: sum over products `j..n` of their best `k` values.
    suffix: Vec<f64>,
}

impl ColumnTops {
    fn new(inst: &Instance, k: usize) -> Self {
        let (m, n) = (inst.resellers(), inst.products());
        let mut sums = vec![0.0; n * (k + 1)];
        for j in 0..n {
            let mut col: Vec<f64> = (0..m).map(|i| inst.weight(i, j)).collect();
            col.sort_by(|a, b| b.total_cmp(a));
            let mut acc = 0.0;
            for t in 0..=k {
                sums[j * (k + 1) + t] = acc;
                if let Some(v) = col.get(t) {
                    acc += v;
                }
            }
        }
        let mut suffix = vec![0.0; n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] + sums[j * (k + 1) + k];
        }
        ColumnTops { k, sums, suffix }
    }

    fn get(&self, j: usize, take: usize) -> f64 {
        self.sums[j * (self.k + 1) + take.min(self.k)]
    }
}

/// Largest `sum ln u_i` subject to `u_i <= caps[i]` and `sum u_i <= total`:
/// the smallest caps are met exactly and the rest share the remainder
/// evenly. `caps` is sorted in place.
fn water_filled_log(caps: &mut [f64], total: f64) -> f64 {
    caps.sort_unstable_by(f64::total_cmp);
    let mut left = total;
    let mut acc = 0.0;
    for (k, &c) in caps.iter().enumerate() {
        let share = left / (caps.len() - k) as f64;
        if share <= c {
            if share <= 0.0 {
                return f64::NEG_INFINITY;
            }
            return acc + (caps.len() - k) as f64 * share.ln();
        }
        if c <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += c.ln();
        left -= c;
    }
    acc
}

struct Saved {
    reseller: usize,
    utility: f64,
    revenue: f64,
    optimistic: f64,
    log_sum: f64,
    zeros: usize,
}

struct BranchAndBound<'a> {
    inst: &'a Instance,
    l2: usize,
    r2: usize,
    top: TopSums,
    columns: ColumnTops,
    utils: Vec<f64>,
    /// Sum of `utils`.
    revenue: f64,
    scratch: Vec<f64>,
    optimistic: Vec<f64>,
    /// Sum of `ln` over the positive optimistic values.
    log_sum: f64,
    /// Number of re-sellers whose optimistic value is zero.
    zeros: usize,
    saved: Vec<Saved>,
    seed: f64,
    best: Option<(Allocation, f64)>,
}

impl BranchAndBound<'_> {
    fn set_optimistic(&mut self, i: usize, value: f64) {
        let old = self.optimistic[i];
        if old > 0.0 {
            self.log_sum -= old.ln();
        } else {
            self.zeros -= 1;
        }
        if value > 0.0 {
            self.log_sum += value.ln();
        } else {
            self.zeros += 1;
        }
        self.optimistic[i] = value;
    }

    /// Optimistic `ln` Nash value below the node just entered at `(j, i)`.
    /// The per-re-seller caps alone give `log_sum`; when that does not
    /// settle the comparison, the caps are combined with a bound on the
    /// total utility still obtainable from products `j..n`.
    fn bound(&mut self, state: &SearchState, j: usize, i: usize, beat: f64) -> f64 {
        let slack = |b: f64| b + 1e-9 * (1.0 + b.abs());
        if self.zeros > 0 {
            return f64::NEG_INFINITY;
        }
        let loose = slack(self.log_sum);
        if loose < beat {
            return loose;
        }
        let copies_left = (self.r2 - state.copies[j]).min(state.m - i - 1);
        let total = self.revenue + self.columns.get(j, copies_left) + self.columns.suffix[j + 1];
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.optimistic);
        slack(water_filled_log(&mut self.scratch, total).min(self.log_sum))
    }
}

impl SearchHooks for BranchAndBound<'_> {
    fn enter(&mut self, state: &SearchState, j: usize, i: usize, assigned: bool) -> bool {
        self.saved.push(Saved {
            reseller: i,
            utility: self.utils[i],
            revenue: self.revenue,
            optimistic: self.optimistic[i],
            log_sum: self.log_sum,
            zeros: self.zeros,
        });
        if assigned {
            let w = self.inst.weight(i, j);
            self.utils[i] += w;
            self.revenue += w;
        }
        let room = self.l2 - state.sizes[i];
        let value = self.utils[i] + self.top.get(self.inst, i, j + 1, room);
        self.set_optimistic(i, value);
        match self.best.as_ref().map(|(_, v)| *v) {
            Some(best) => {
                // ties with the incumbent cannot replace it
                let next_up = if best.is_finite() { best.next_up() } else { best };
                self.bound(state, j, i, next_up) > best
            }
            None => self.bound(state, j, i, self.seed) >= self.seed,
        }
    }

    fn leave(&mut self, _state: &SearchState, _j: usize, _i: usize, _assigned: bool) {
        let s = self.saved.pop().expect("leave without enter");
        self.utils[s.reseller] = s.utility;
        self.revenue = s.revenue;
        self.optimistic[s.reseller] = s.optimistic;
        self.log_sum = s.log_sum;
        self.zeros = s.zeros;
    }

    fn leaf(&mut self, state: &SearchState) -> Decision {
        let alloc = Allocation::from_matrix(state.m, state.n, &state.matrix);
        let value = nash_welfare(self.inst, &alloc).log;
        if self.best.as_ref().is_none_or(|(_, best)| value > *best) {
            self.best = Some((alloc, value));
        }
        Decision::Continue
    }
}

/// Maximises the Nash product over all feasible allocations, expanding at
/// most `budget` decision nodes. When the budget runs out the best
/// allocation seen so far is returned with `exhaustive == false`.
pub fn exact_nash_oracle(inst: &Instance, b: &CardinalityBounds, budget: u64) -> OracleResult {
    let (m, n) = (inst.resellers(), inst.products());
    let seed = [greedy_nash(inst, b), seal(inst, b)]
        .iter()
        .filter(|r| r.is_success())
        .map(|r| nash_welfare(inst, &r.allocation).log)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut search = PairSearch::new(m, n, *b, budget);
    let tight = *search.bounds();
    let (l2, r2) = (tight.l2, tight.r2);
    let top = TopSums::new(inst, l2);
    let optimistic: Vec<f64> = (0..m).map(|i| top.get(inst, i, 0, l2)).collect();
    let mut bb = BranchAndBound {
        inst,
        l2,
        r2,
        top,
        columns: ColumnTops::new(inst, r2),
        utils: vec![0.0; m],
        revenue: 0.0,
        scratch: Vec::with_capacity(m),
        log_sum: optimistic.iter().filter(|&&v| v > 0.0).map(|v| v.ln()).sum(),
        zeros: optimistic.iter().filter(|&&v| v <= 0.0).count(),
        optimistic,
        saved: Vec::new(),
        seed,
        best: None,
    };
    let end = search.walk(&mut bb);
    let (best_allocation, best_nash_log) = match bb.best {
        Some((a, v)) => (Some(a), v),
        None => (None, f64::NEG_INFINITY),
    };
    OracleResult {
        best_allocation,
        best_nash_log,
        nodes_expanded: search.nodes_expanded(),
        exhaustive: end != super::search::SearchEnd::BudgetExhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_c_optimum() {
        let inst = Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![5.5, 2.0, 2.5], vec![5.0, 4.0, 1.0]]).unwrap();
        let r = exact_nash_oracle(&inst, &CardinalityBounds::uniform(2), u64::MAX);
        assert!(r.exhaustive);
        assert_eq!(r.best_allocation.unwrap().to_vecs(), vec![vec![0, 2], vec![1, 2], vec![0, 1]]);
        assert!((r.best_nash_log.exp() - 364.5).abs() < 1e-9);
    }

    #[test]
    fn theorem_three_optimum() {
        let inst = Instance::from_rows(&[vec![1.0, 1.0, 2.2, 2.2], vec![0.2, 0.2, 3.0, 3.0]]).unwrap();
        let b = CardinalityBounds { l1: 2, l2: 2, r1: 1, r2: 1 };
        let r = exact_nash_oracle(&inst, &b, u64::MAX);
        assert!(r.exhaustive);
        assert_eq!(r.best_allocation.unwrap().to_vecs(), vec![vec![0, 1], vec![2, 3]]);
        assert!((r.best_nash_log.exp() - 12.0).abs() < 1e-9);
    }

    #[test]
    fn single_pair() {
        let inst = Instance::from_rows(&[vec![2.5]]).unwrap();
        let r = exact_nash_oracle(&inst, &CardinalityBounds::uniform(1), 10);
        assert_eq!(r.best_allocation.unwrap().to_vecs(), vec![vec![0]]);
        assert_eq!(r.best_nash_log, 2.5f64.ln());
    }

    #[test]
    fn zero_utilities_still_return_an_allocation() {
        let inst = Instance::new(2, 2, vec![0.0; 4]).unwrap();
        let r = exact_nash_oracle(&inst, &CardinalityBounds::uniform(1), u64::MAX);
        assert_eq!(r.best_allocation.unwrap().to_vecs(), vec![vec![0], vec![1]]);
        assert_eq!(r.best_nash_log, f64::NEG_INFINITY);
    }

    #[test]
    fn budget_stops_the_search() {
        let inst = Instance::new(6, 6, (0..36).map(|v| (v % 7 + 1) as f64).collect()).unwrap();
        let r = exact_nash_oracle(&inst, &CardinalityBounds::uniform(3), 5);
        assert!(!r.exhaustive);
        assert!(r.nodes_expanded <= 5);
    }

    #[test]
    fn water_filling() {
        // caps large enough: even split
        assert!((water_filled_log(&mut [10.0, 10.0], 4.0) - 2.0 * 2f64.ln()).abs() < 1e-12);
        // first cap binds, the rest share what is left
        assert!((water_filled_log(&mut [5.0, 1.0, 5.0], 9.0) - (1f64.ln() + 2.0 * 4f64.ln())).abs() < 1e-12);
        // total above every cap: caps alone
        assert!((water_filled_log(&mut [2.0, 3.0], 100.0) - 6f64.ln()).abs() < 1e-12);
        assert_eq!(water_filled_log(&mut [0.0, 3.0], 100.0), f64::NEG_INFINITY);
    }

    #[test]
    fn scanning_matches_the_table() {
        let inst = Instance::new(2, 5, vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0]).unwrap();
        let table = TopSums::new(&inst, 3);
        for i in 0..2 {
            for from in 0..=5 {
                for take in 0..=3 {
                    assert_eq!(table.get(&inst, i, from, take), TopSums::Scan.get(&inst, i, from, take));
                }
            }
        }
    }
}
