//! Round-robin picking in a caller-chosen re-seller order.

use super::{AllocationResult, Builder, Phase};
use crate::fairness::check_ef1;
use crate::instance::{check_feasibility, CardinalityBounds, Instance};
use crate::{Error, Result};

/// Cycles through `order`; on its turn each re-seller below `l1` takes its
/// favourite product with fewer than `r1` copies, or failing that fewer than
/// `r2`. Once no bundle below `l1` can move, re-sellers below `l2` keep
/// picking in the same order, but only products still short of `r1` copies.
/// The EF1 verdict of the result is attached.
pub fn round_robin(inst: &Instance, b: &CardinalityBounds, order: &[usize]) -> Result<AllocationResult> {
    let m = inst.resellers();
    let mut seen = vec![false; m];
    if order.len() != m || order.iter().any(|&i| i >= m || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidParameter(format!("order {order:?} is not a permutation of 0..{m}")));
    }
    if !check_feasibility(m, inst.products(), b).feasible {
        return Ok(AllocationResult::infeasible_input(m));
    }
    let mut st = Builder::new(inst, *b);

    loop {
        let mut moved = false;
        for &i in order {
            if st.size(i) >= b.l1 {
                continue;
            }
            let copies = &st.copies;
            let pick =
                st.most_preferred(i, |j| copies[j] < b.r1).or_else(|| st.most_preferred(i, |j| copies[j] < b.r2));
            if let Some(j) = pick {
                st.assign(i, j, Phase::Round);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    loop {
        let mut moved = false;
        for &i in order {
            if st.size(i) >= b.l2 {
                continue;
            }
            let copies = &st.copies;
            if let Some(j) = st.most_preferred(i, |j| copies[j] < b.r1) {
                st.assign(i, j, Phase::Upper);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    let mut result = st.finish(b);
    result.ef1 = Some(check_ef1(inst, &result.allocation));
    Ok(result)
}
