//! Last-resort repair of lower-bound deficits along alternating chains.
//!
//! The greedy phases never exceed `l2` or `r2`, but they can leave a
//! re-seller short of `l1` (every product with a spare copy is already in
//! its bundle) or a product short of `r1` (no holder of an over-supplied
//! product is left to swap). A short re-seller takes a product from one of
//! its holders, who takes another product in turn, and so on until the
//! chain reaches a product with a spare copy or a holder that can afford to
//! lose one; a short product is handled symmetrically. The difference
//! between the current allocation and any feasible one splits into such
//! chains, so one exists whenever the bounds are satisfiable. Chains are
//! found breadth first, scanning indices in ascending order.

use std::collections::VecDeque;

use super::{Builder, Phase};

enum End {
    Reseller(usize),
    Product(usize),
}

impl Builder<'_> {
    /// Repairs every `l1` / `r1` deficit, lowest index first, re-sellers
    /// before products. Returns false if some deficit has no chain.
    pub(crate) fn augment(&mut self) -> bool {
        let (l1, r1) = (self.bounds.l1, self.bounds.r1);
        loop {
            if let Some(i) = (0..self.m()).find(|&i| self.size(i) < l1) {
                if !self.grow_reseller(i) {
                    return false;
                }
            } else if let Some(j) = (0..self.n()).find(|&j| self.copies[j] < r1) {
                if !self.grow_product(j) {
                    return false;
                }
            } else {
                return true;
            }
        }
    }

    #[allow(clippy::needless_range_loop)] // indexes the chain tables and the allocation together
    fn grow_reseller(&mut self, start: usize) -> bool {
        let (m, n) = (self.m(), self.n());
        let (l1, r2) = (self.bounds.l1, self.bounds.r2);
        // taker[j]: re-seller that receives j; given_up[k]: product k hands on
        let mut taker: Vec<Option<usize>> = vec![None; n];
        let mut given_up: Vec<Option<usize>> = vec![None; m];
        let mut seen = vec![false; m];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut end = None;
        'search: while let Some(r) = queue.pop_front() {
            for j in 0..n {
                if self.alloc.contains(r, j) || taker[j].is_some() {
                    continue;
                }
                taker[j] = Some(r);
                if self.copies[j] < r2 {
                    end = Some(End::Product(j));
                    break 'search;
                }
                for k in 0..m {
                    if seen[k] || !self.alloc.contains(k, j) {
                        continue;
                    }
                    seen[k] = true;
                    given_up[k] = Some(j);
                    if self.size(k) > l1 {
                        end = Some(End::Reseller(k));
                        break 'search;
                    }
                    queue.push_back(k);
                }
            }
        }
        let mut j = match end {
            None => return false,
            Some(End::Product(j)) => j,
            Some(End::Reseller(k)) => {
                let j = given_up[k].expect("reached through a product");
                self.unassign(k, j, Phase::AugmentOut);
                j
            }
        };
        loop {
            let r = taker[j].expect("on the chain");
            if r != start {
                let out = given_up[r].expect("on the chain");
                self.unassign(r, out, Phase::AugmentOut);
                self.assign(r, j, Phase::AugmentIn);
                j = out;
            } else {
                self.assign(r, j, Phase::AugmentIn);
                return true;
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn grow_product(&mut self, start: usize) -> bool {
        let (m, n) = (self.m(), self.n());
        let (l2, r1) = (self.bounds.l2, self.bounds.r1);
        // wanted[r]: product r takes; dropped_by[q]: re-seller that lets q go
        let mut wanted: Vec<Option<usize>> = vec![None; m];
        let mut dropped_by: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut end = None;
        'search: while let Some(p) = queue.pop_front() {
            for r in 0..m {
                if self.alloc.contains(r, p) || wanted[r].is_some() {
                    continue;
                }
                wanted[r] = Some(p);
                if self.size(r) < l2 {
                    end = Some(End::Reseller(r));
                    break 'search;
                }
                for &q in self.alloc.bundle(r) {
                    if seen[q] {
                        continue;
                    }
                    seen[q] = true;
                    dropped_by[q] = Some(r);
                    if self.copies[q] > r1 {
                        end = Some(End::Product(q));
                        break 'search;
                    }
                    queue.push_back(q);
                }
            }
        }
        let mut r = match end {
            None => return false,
            Some(End::Reseller(r)) => r,
            Some(End::Product(q)) => {
                let r = dropped_by[q].expect("reached through a re-seller");
                self.unassign(r, q, Phase::AugmentOut);
                r
            }
        };
        loop {
            let p = wanted[r].expect("on the chain");
            self.assign(r, p, Phase::AugmentIn);
            if p == start {
                return true;
            }
            r = dropped_by[p].expect("on the chain");
            self.unassign(r, p, Phase::AugmentOut);
        }
    }
}
