//! Edmonds-Karp max-flow on integer capacities.

use std::collections::VecDeque;

struct Arc {
    to: usize,
    cap: u128,
}

pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: u128) {
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap });
    }

    /// Maximum flow from `s` to `t`; consumes residual capacities.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u128 {
        let mut total = 0u128;
        loop {
            let mut parent_arc = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let arc = &self.arcs[a];
                    if arc.cap > 0 && !seen[arc.to] {
                        seen[arc.to] = true;
                        parent_arc[arc.to] = a;
                        queue.push_back(arc.to);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut bottleneck = u128::MAX;
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                bottleneck = bottleneck.min(self.arcs[a].cap);
                v = self.arcs[a ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                self.arcs[a].cap -= bottleneck;
                self.arcs[a ^ 1].cap += bottleneck;
                v = self.arcs[a ^ 1].to;
            }
            total += bottleneck;
        }
    }
}
