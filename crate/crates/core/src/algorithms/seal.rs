//! SeAl: sequential egalitarian rounds, poorest re-seller picks first.

use super::{AllocationResult, Builder, Phase};
use crate::instance::{check_feasibility, CardinalityBounds, Instance};

/// Runs `l1` rounds in which every re-seller, poorest first (utility at the
/// start of the round, ties by index), takes its favourite product with
/// fewer than `r1` copies, or failing that fewer than `r2`. Greedy
/// replacement follows, then `l2 - l1` further rounds capped by `r2` only.
/// Re-sellers that already hold `l2` products sit the later rounds out.
pub fn seal(inst: &Instance, b: &CardinalityBounds) -> AllocationResult {
    if !check_feasibility(inst.resellers(), inst.products(), b).feasible {
        return AllocationResult::infeasible_input(inst.resellers());
    }
    let mut st = Builder::new(inst, *b);

    for _ in 0..b.l1 {
        for i in st.poorest_first() {
            if st.size(i) >= b.l2 {
                continue;
            }
            let copies = &st.copies;
            let pick =
                st.most_preferred(i, |j| copies[j] < b.r1).or_else(|| st.most_preferred(i, |j| copies[j] < b.r2));
            if let Some(j) = pick {
                st.assign(i, j, Phase::Round);
            }
        }
    }

    st.replace();

    for _ in b.l1..b.l2 {
        for i in st.poorest_first() {
            if st.size(i) >= b.l2 {
                continue;
            }
            let copies = &st.copies;
            if let Some(j) = st.most_preferred(i, |j| copies[j] < b.r2) {
                st.assign(i, j, Phase::Upper);
            }
        }
    }

    st.augment();
    st.finish(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Status;
    use crate::metrics::nash_welfare;

    #[test]
    fn table_c() {
        let inst = Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![5.5, 2.0, 2.5], vec![5.0, 4.0, 1.0]]).unwrap();
        let r = seal(&inst, &CardinalityBounds::uniform(2));
        assert_eq!(r.status, Status::Success);
        assert_eq!(r.allocation.to_vecs(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(nash_welfare(&inst, &r.allocation).product, 320.0);
        assert_eq!(r.trace_lines(), "round,0,0,7\nround,1,0,5.5\nround,2,1,4\nround,2,2,5\nround,1,2,8\nround,0,1,8\n");
    }

    #[test]
    fn table_d() {
        let inst = Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![6.0, 1.5, 2.5], vec![5.0, 4.0, 1.0]]).unwrap();
        let r = seal(&inst, &CardinalityBounds::uniform(2));
        assert_eq!(r.status, Status::Success);
        assert_eq!(nash_welfare(&inst, &r.allocation).product, 340.0);
    }

    #[test]
    fn single_pair() {
        let inst = Instance::new(1, 1, vec![2.0]).unwrap();
        let r = seal(&inst, &CardinalityBounds::uniform(1));
        assert_eq!(r.allocation.to_vecs(), vec![vec![0]]);
    }

    #[test]
    fn upper_rounds_extend_bundles() {
        let inst = Instance::from_rows(&[vec![3.0, 2.0, 1.0], vec![1.0, 2.0, 3.0]]).unwrap();
        let b = CardinalityBounds::new(1, 3, 1, 2).unwrap();
        let r = seal(&inst, &b);
        assert!(r.is_success());
        assert_eq!(r.allocation.bundle_sizes(), vec![3, 3]);
    }
}
