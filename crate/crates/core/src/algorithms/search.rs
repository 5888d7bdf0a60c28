//! Depth-first enumeration of feasible allocations.
//!
//! Decisions are made per `(product, re-seller)` pair: products in index
//! order, and within a product re-sellers in index order, each pair either
//! assigned or skipped (assign first). A branch is only opened if every
//! bound can still be met, so each leaf is a feasible allocation and every
//! feasible allocation is a leaf. Besides the per-pair checks, a counting
//! test over all undecided pairs cuts branches whose remaining demand can no
//! longer be met. The walk is iterative, so deep searches on
//! large instances do not grow the call stack.

use crate::instance::{implied_bounds, Allocation, CardinalityBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Decision {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchEnd {
    /// Every branch was visited or cut.
    Complete,
    /// A leaf callback asked to stop.
    Stopped,
    BudgetExhausted,
}

/// Partial assignment visible to [`SearchHooks`].
pub(crate) struct SearchState {
    pub m: usize,
    pub n: usize,
    pub sizes: Vec<usize>,
    pub copies: Vec<usize>,
    pub matrix: Vec<bool>,
}

pub(crate) trait SearchHooks {
    /// Called after the decision for `(product, reseller)` is applied to
    /// `state`; returning false cuts the branch.
    fn enter(&mut self, _state: &SearchState, _product: usize, _reseller: usize, _assigned: bool) -> bool {
        true
    }

    /// Called before the decision is undone; mirrors every successful or
    /// failed `enter`.
    fn leave(&mut self, _state: &SearchState, _product: usize, _reseller: usize, _assigned: bool) {}

    fn leaf(&mut self, state: &SearchState) -> Decision;
}

pub(crate) struct PairSearch {
    bounds: CardinalityBounds,
    budget: u64,
    nodes: u64,
    state: SearchState,
}

impl PairSearch {
    pub fn new(m: usize, n: usize, bounds: CardinalityBounds, budget: u64) -> Self {
        PairSearch {
            bounds: implied_bounds(m, n, &bounds),
            budget,
            nodes: 0,
            state: SearchState { m, n, sizes: vec![0; m], copies: vec![0; n], matrix: vec![false; m * n] },
        }
    }

    /// The bounds actually searched with, tightened by [`implied_bounds`].
    pub fn bounds(&self) -> &CardinalityBounds {
        &self.bounds
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.nodes
    }

    fn can_assign(&self, j: usize, i: usize) -> bool {
        self.state.sizes[i] < self.bounds.l2 && self.state.copies[j] < self.bounds.r2
    }

    fn can_skip(&self, j: usize, i: usize) -> bool {
        let s = &self.state;
        s.copies[j] + (s.m - i - 1) >= self.bounds.r1 && s.sizes[i] + (s.n - j - 1) >= self.bounds.l1
    }

    /// Counting test on the residual problem after the decision at
    /// `(j, i)`: every open re-seller and product must be able to reach its
    /// lower bound with the pairs still undecided, and the total demand on
    /// each side must fit the room on the other.
    fn residual_fits(&self, j: usize, i: usize) -> bool {
        let s = &self.state;
        let b = &self.bounds;
        let later_products = s.n - j - 1;
        let (mut need_r, mut room_r) = (0usize, 0usize);
        for (r, &size) in s.sizes.iter().enumerate() {
            let open = later_products + usize::from(r > i);
            let need = b.l1.saturating_sub(size);
            let room = (b.l2 - size).min(open);
            if need > room {
                return false;
            }
            need_r += need;
            room_r += room;
        }
        let (mut need_p, mut room_p) = (0usize, 0usize);
        for (p, &copies) in s.copies.iter().enumerate().skip(j) {
            let open = if p == j { s.m - i - 1 } else { s.m };
            let need = b.r1.saturating_sub(copies);
            let room = (b.r2 - copies).min(open);
            if need > room {
                return false;
            }
            need_p += need;
            room_p += room;
        }
        need_r <= room_p && need_p <= room_r
    }

    fn apply(&mut self, j: usize, i: usize, assign: bool) {
        if assign {
            let s = &mut self.state;
            s.sizes[i] += 1;
            s.copies[j] += 1;
            s.matrix[i * s.n + j] = true;
        }
    }

    fn undo(&mut self, j: usize, i: usize, assign: bool) {
        if assign {
            let s = &mut self.state;
            s.sizes[i] -= 1;
            s.copies[j] -= 1;
            s.matrix[i * s.n + j] = false;
        }
    }

    pub fn walk<H: SearchHooks>(&mut self, hooks: &mut H) -> SearchEnd {
        let (m, n) = (self.state.m, self.state.n);
        let b = self.bounds;
        if m == 0 || n == 0 || b.l1 > b.l2 || b.r1 > b.r2 || b.l1 > n || b.r1 > m {
            return SearchEnd::Complete;
        }
        let total = m * n;
        // 0: assign not yet tried, 1: skip not yet tried, 2: exhausted
        let mut stage = vec![0u8; total + 1];
        let mut assigned = vec![false; total];
        let mut pos = 0usize;
        loop {
            if pos == total {
                if hooks.leaf(&self.state) == Decision::Stop {
                    return SearchEnd::Stopped;
                }
                stage[pos] = 2;
            }
            let (j, i) = (pos / m, pos % m);
            let option = if pos < total { stage[pos] } else { 2 };
            if option < 2 {
                stage[pos] += 1;
                let assign = option == 0;
                let allowed = if assign { self.can_assign(j, i) } else { self.can_skip(j, i) };
                if !allowed {
                    continue;
                }
                if self.nodes >= self.budget {
                    return SearchEnd::BudgetExhausted;
                }
                self.nodes += 1;
                self.apply(j, i, assign);
                if !self.residual_fits(j, i) {
                    self.undo(j, i, assign);
                    continue;
                }
                if hooks.enter(&self.state, j, i, assign) {
                    assigned[pos] = assign;
                    pos += 1;
                    stage[pos] = 0;
                } else {
                    hooks.leave(&self.state, j, i, assign);
                    self.undo(j, i, assign);
                }
                continue;
            }
            if pos == 0 {
                return SearchEnd::Complete;
            }
            pos -= 1;
            let (j, i) = (pos / m, pos % m);
            hooks.leave(&self.state, j, i, assigned[pos]);
            self.undo(j, i, assigned[pos]);
        }
    }

    /// Closure front-end: `enter` sees the partial state, `leaf` the finished
    /// allocation. Returns true when the search finished (complete or
    /// stopped), false when the budget ran out.
    pub fn run<E, L>(&mut self, enter: &mut E, leaf: &mut L) -> bool
    where
        E: FnMut(&SearchState, (usize, usize)) -> bool,
        L: FnMut(&Allocation) -> Decision,
    {
        struct Closures<'a, E, L> {
            enter: &'a mut E,
            leaf: &'a mut L,
        }
        impl<E, L> SearchHooks for Closures<'_, E, L>
        where
            E: FnMut(&SearchState, (usize, usize)) -> bool,
            L: FnMut(&Allocation) -> Decision,
        {
            fn enter(&mut self, state: &SearchState, j: usize, i: usize, _assigned: bool) -> bool {
                (self.enter)(state, (j, i))
            }
            fn leaf(&mut self, state: &SearchState) -> Decision {
                (self.leaf)(&Allocation::from_matrix(state.m, state.n, &state.matrix))
            }
        }
        self.walk(&mut Closures { enter, leaf }) != SearchEnd::BudgetExhausted
    }
}
