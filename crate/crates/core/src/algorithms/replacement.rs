//! Greedy replacement: move copies from over-supplied products to products
//! below `r1`, losing as little utility as possible per swap.

use super::{AllocationResult, Builder};
use crate::instance::{Allocation, CardinalityBounds, Instance};

impl Builder<'_> {
    /// For each product below `r1` (ascending), repeatedly pick the holder
    /// `i` of some product `l` with more than `r1` copies, `j` not in `A_i`,
    /// minimising `W[i][l] - W[i][j]` (ties to the smallest `(i, l)`), and
    /// swap `l` for `j`. Returns false if some product could not reach `r1`.
    pub(crate) fn replace(&mut self) -> bool {
        let r1 = self.bounds.r1;
        let mut complete = true;
        for j in 0..self.n() {
            while self.copies[j] < r1 {
                match self.cheapest_swap(j) {
                    Some((i, l)) => self.swap(i, l, j),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
        }
        complete
    }

    fn cheapest_swap(&self, j: usize) -> Option<(usize, usize)> {
        let r1 = self.bounds.r1;
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.m() {
            if self.alloc.contains(i, j) {
                continue;
            }
            let wj = self.inst.weight(i, j);
            for &l in self.alloc.bundle(i) {
                if self.copies[l] <= r1 {
                    continue;
                }
                let loss = self.inst.weight(i, l) - wj;
                if best.is_none_or(|(_, _, b)| loss < b) {
                    best = Some((i, l, loss));
                }
            }
        }
        best.map(|(i, l, _)| (i, l))
    }
}

/// Runs greedy replacement on an existing allocation.
///
/// The status is `success` only if the repaired allocation satisfies every
/// bound, `repair-incomplete` otherwise.
pub fn greedy_replacement(inst: &Instance, b: &CardinalityBounds, alloc: &Allocation) -> AllocationResult {
    let mut st = Builder::from_allocation(inst, *b, alloc.clone());
    st.replace();
    st.finish(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Status;

    #[test]
    fn satisfied_allocation_is_unchanged() {
        let inst = Instance::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let a = Allocation::from_bundles(2, vec![vec![0], vec![1]]).unwrap();
        let r = greedy_replacement(&inst, &CardinalityBounds::uniform(1), &a);
        assert_eq!(r.allocation, a);
        assert!(r.trace.is_empty());
        assert_eq!(r.status, Status::Success);
    }

    #[test]
    fn tie_goes_to_lowest_reseller() {
        let inst = Instance::from_rows(&[vec![5.0, 1.0], vec![5.0, 1.0]]).unwrap();
        let a = Allocation::from_bundles(2, vec![vec![0], vec![0]]).unwrap();
        let r = greedy_replacement(&inst, &CardinalityBounds::uniform(1), &a);
        assert_eq!(r.allocation.to_vecs(), vec![vec![1], vec![0]]);
        assert_eq!(r.status, Status::Success);
        assert_eq!(r.trace_lines(), "replace-out,0,0,0\nreplace-in,0,1,1\n");
    }

    #[test]
    fn picks_minimum_loss() {
        // u2 loses 1 by swapping p1 -> p2, u1 would lose 4
        let inst = Instance::from_rows(&[vec![5.0, 1.0], vec![3.0, 2.0]]).unwrap();
        let a = Allocation::from_bundles(2, vec![vec![0], vec![0]]).unwrap();
        let r = greedy_replacement(&inst, &CardinalityBounds::uniform(1), &a);
        assert_eq!(r.allocation.to_vecs(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn no_donor_means_incomplete() {
        let inst = Instance::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let a = Allocation::from_bundles(2, vec![vec![0], vec![]]).unwrap();
        let r = greedy_replacement(&inst, &CardinalityBounds { l1: 0, l2: 1, r1: 1, r2: 1 }, &a);
        assert_eq!(r.status, Status::RepairIncomplete);
        assert_eq!(r.allocation, a);
    }
}
