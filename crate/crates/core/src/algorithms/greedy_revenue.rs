//! GreedyRevenue baseline: take the most valuable admissible pair first.

use super::{AllocationResult, Builder, Phase};
use crate::instance::{check_feasibility, CardinalityBounds, Instance};

/// Adds `(i, j)` pairs in descending `W[i][j]` order (ties by `(i, j)`),
/// skipping pairs that would exceed `l2` or `r2` or make the lower bounds
/// unreachable by the residual interval screen. Zero-valued pairs add no
/// revenue and are left to the repair phases. Afterwards bundles are topped
/// up to `l1`, greedy replacement runs, and remaining copies up to `r2` are
/// handed out by Nash gain as in GreedyNash.
pub fn greedy_revenue(inst: &Instance, b: &CardinalityBounds) -> AllocationResult {
    if !check_feasibility(inst.resellers(), inst.products(), b).feasible {
        return AllocationResult::infeasible_input(inst.resellers());
    }
    let (m, n) = (inst.resellers(), inst.products());
    let mut st = Builder::new(inst, *b);

    let mut pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| inst.weight(i, j) > 0.0).collect();
    pairs.sort_by(|&(i, j), &(k, l)| inst.weight(k, l).total_cmp(&inst.weight(i, j)).then((i, j).cmp(&(k, l))));

    // residual demand and capacity on each side
    let mut reseller_need = m * b.l1;
    let mut reseller_room = m * b.l2;
    let mut product_need = n * b.r1;
    let mut product_room = n * b.r2;
    for (i, j) in pairs {
        if st.size(i) >= b.l2 || st.copies[j] >= b.r2 {
            continue;
        }
        let rn = reseller_need - usize::from(st.size(i) < b.l1);
        let pn = product_need - usize::from(st.copies[j] < b.r1);
        let (rr, pr) = (reseller_room - 1, product_room - 1);
        if rn > pr || pn > rr {
            continue;
        }
        (reseller_need, product_need, reseller_room, product_room) = (rn, pn, rr, pr);
        st.assign(i, j, Phase::Revenue);
    }

    st.fill_to_lower();
    st.replace();
    st.greedy_pass(b.r2, b.l2, Phase::Upper);
    st.augment();
    st.finish(b)
}
