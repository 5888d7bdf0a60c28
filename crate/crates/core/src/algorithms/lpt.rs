//! LPT-style allocation: the least happy re-seller always picks next.

use super::{AllocationResult, Builder, Phase};
use crate::instance::{check_feasibility, CardinalityBounds, Instance};

/// Repeatedly lets the re-seller with the lowest utility (ties by index)
/// that still has a legal pick take its favourite product with fewer than
/// `r1` copies, or failing that fewer than `r2`, until every product has
/// `r1` copies. Bundle sizes are not constrained; the status is judged
/// against the product bounds only.
pub fn lpt_allocate(inst: &Instance, b: &CardinalityBounds) -> AllocationResult {
    let relaxed = CardinalityBounds { l1: 0, l2: inst.products(), ..*b };
    if !check_feasibility(inst.resellers(), inst.products(), &relaxed).feasible {
        return AllocationResult::infeasible_input(inst.resellers());
    }
    let mut st = Builder::new(inst, relaxed);
    while st.copies.iter().any(|&c| c < b.r1) {
        let next = st.poorest_first().into_iter().find_map(|i| {
            let copies = &st.copies;
            st.most_preferred(i, |j| copies[j] < b.r1)
                .or_else(|| st.most_preferred(i, |j| copies[j] < b.r2))
                .map(|j| (i, j))
        });
        match next {
            Some((i, j)) => st.assign(i, j, Phase::Lpt),
            None => break,
        }
    }
    st.finish(&relaxed)
}
