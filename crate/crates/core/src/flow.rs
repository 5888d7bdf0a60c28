//! Dinic max-flow with lower-bounded arcs, used by the feasibility test.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: usize,
    lower: usize,
}

#[derive(Debug)]
pub(crate) struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    // node excess induced by lower bounds
    excess: Vec<i64>,
    // original capacity (upper - lower) per forward arc
    base_cap: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            nodes,
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes + 2],
            excess: vec![0; nodes],
            base_cap: Vec::new(),
        }
    }

    fn push_arc(&mut self, from: usize, to: usize, cap: usize, lower: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, lower });
        self.adj[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0, lower: 0 });
        self.adj[to].push(id + 1);
        self.base_cap.push(cap);
        self.base_cap.push(0);
        id
    }

    /// Adds an arc carrying between `lower` and `upper` units. Returns a handle
    /// for [`FlowNetwork::flow`].
    pub fn add_bounded_edge(&mut self, from: usize, to: usize, lower: usize, upper: usize) -> usize {
        debug_assert!(lower <= upper);
        self.excess[to] += lower as i64;
        self.excess[from] -= lower as i64;
        self.push_arc(from, to, upper - lower, lower)
    }

    /// Total flow on an arc after a successful [`FlowNetwork::solve_circulation`].
    pub fn flow(&self, handle: usize) -> usize {
        let a = &self.arcs[handle];
        a.lower + (self.base_cap[handle] - a.cap)
    }

    /// Finds a circulation meeting every lower bound; false if none exists.
    pub fn solve_circulation(&mut self) -> bool {
        let super_source = self.nodes;
        let super_sink = self.nodes + 1;
        let mut demand = 0usize;
        for v in 0..self.nodes {
            let e = self.excess[v];
            if e > 0 {
                self.push_arc(super_source, v, e as usize, 0);
                demand += e as usize;
            } else if e < 0 {
                self.push_arc(v, super_sink, (-e) as usize, 0);
            }
        }
        self.max_flow(super_source, super_sink) == demand
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let total_nodes = self.nodes + 2;
        let mut total = 0;
        loop {
            let level = self.levels(s, t, total_nodes);
            if level[t] == usize::MAX {
                return total;
            }
            let mut iter = vec![0usize; total_nodes];
            loop {
                let pushed = self.augment(s, t, usize::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn levels(&self, s: usize, t: usize, total_nodes: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; total_nodes];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                continue;
            }
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && level[a.to] == usize::MAX {
                    level[a.to] = level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, limit: usize, level: &[usize], iter: &mut [usize]) -> usize {
        if u == t {
            return limit;
        }
        while iter[u] < self.adj[u].len() {
            let id = self.adj[u][iter[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.augment(to, t, limit.min(cap), level, iter);
                if pushed > 0 {
                    self.arcs[id].cap -= pushed;
                    self.arcs[id ^ 1].cap += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_max_flow() {
        // s=0 -> 1 -> 3, s -> 2 -> 3 with a cross arc
        let mut net = FlowNetwork::new(4);
        net.add_bounded_edge(0, 1, 0, 3);
        net.add_bounded_edge(0, 2, 0, 2);
        net.add_bounded_edge(1, 2, 0, 5);
        net.add_bounded_edge(1, 3, 0, 2);
        net.add_bounded_edge(2, 3, 0, 3);
        assert_eq!(net.max_flow(0, 3), 5);
    }

    #[test]
    fn lower_bound_cycle() {
        let mut net = FlowNetwork::new(2);
        let a = net.add_bounded_edge(0, 1, 2, 4);
        let b = net.add_bounded_edge(1, 0, 0, 3);
        assert!(net.solve_circulation());
        assert_eq!(net.flow(a), net.flow(b));
        assert!(net.flow(a) >= 2);

        let mut net = FlowNetwork::new(2);
        net.add_bounded_edge(0, 1, 2, 4);
        net.add_bounded_edge(1, 0, 0, 1);
        assert!(!net.solve_circulation());
    }
}
