//! GreedyNash: hand each product to whoever gains the most Nash welfare.

use super::{AllocationResult, Builder, Phase};
use crate::instance::{check_feasibility, CardinalityBounds, Instance};

/// Runs the six GreedyNash phases:
///
/// 1. empty bundles;
/// 2. every re-seller, in index order, takes its favourite product that has
///    fewer than `r2` copies;
/// 3. for each product in index order, copies go to the re-seller with the
///    largest multiplicative gain `(U_i + W_ij) / U_i` until `r1` copies exist;
/// 4. bundles below `l1` are topped up with the owner's favourites;
/// 5. greedy replacement for products still below `r1`;
/// 6. the phase 3 rule again, now up to `r2` copies.
///
/// Phases 3 and 6 only consider re-sellers holding fewer than `l2` products.
pub fn greedy_nash(inst: &Instance, b: &CardinalityBounds) -> AllocationResult {
    if !check_feasibility(inst.resellers(), inst.products(), b).feasible {
        return AllocationResult::infeasible_input(inst.resellers());
    }
    run(inst, *b).finish(b)
}

/// GreedyNash without re-seller side bounds (`l1 = 0`, `l2 = n`); product
/// bounds still apply.
pub fn uncons_greedy_nash(inst: &Instance, b: &CardinalityBounds) -> AllocationResult {
    let relaxed = CardinalityBounds { l1: 0, l2: inst.products(), ..*b };
    if !check_feasibility(inst.resellers(), inst.products(), &relaxed).feasible {
        return AllocationResult::infeasible_input(inst.resellers());
    }
    run(inst, relaxed).finish(&relaxed)
}

fn run(inst: &Instance, b: CardinalityBounds) -> Builder<'_> {
    let mut st = Builder::new(inst, b);

    if b.l2 > 0 {
        for i in 0..st.m() {
            let copies = &st.copies;
            if let Some(j) = st.most_preferred(i, |j| copies[j] < b.r2) {
                st.assign(i, j, Phase::First);
            }
        }
    }

    st.greedy_pass(b.r1, b.l2, Phase::Greedy);
    st.fill_to_lower();
    st.replace();
    st.greedy_pass(b.r2, b.l2, Phase::Upper);
    st.augment();
    st
}
