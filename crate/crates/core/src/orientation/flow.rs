use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: u32,
}

/// Dinic max-flow on a small integral network.
#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), adj: vec![Vec::new(); nodes], level: vec![0; nodes], next: vec![0; nodes] }
    }

    /// Adds `from -> to` with capacity `cap` and returns the arc id.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently carried by arc `id` (the residual capacity of its twin).
    pub(crate) fn flow(&self, id: usize) -> u32 {
        self.arcs[id ^ 1].cap
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let f = self.dfs(s, t, u32::MAX);
                if f == 0 {
                    break;
                }
                total += u64::from(f);
            }
        }
        total
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: u32) -> u32 {
        if u == t {
            return limit;
        }
        while self.next[u] < self.adj[u].len() {
            let id = self.adj[u][self.next[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let f = self.dfs(to, t, limit.min(cap));
                if f > 0 {
                    self.arcs[id].cap -= f;
                    self.arcs[id ^ 1].cap += f;
                    return f;
                }
            }
            self.next[u] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        let mut net = FlowNetwork::new(6);
        for (u, v, c) in [(0, 1, 2), (0, 2, 3), (1, 3, 2), (2, 3, 4), (2, 4, 2), (3, 5, 3), (4, 5, 2)] {
            net.add_arc(u, v, c);
        }
        assert_eq!(net.max_flow(0, 5), 5);
    }

    #[test]
    fn disconnected_sink() {
        let mut net = FlowNetwork::new(3);
        let a = net.add_arc(0, 1, 4);
        assert_eq!(net.max_flow(0, 2), 0);
        assert_eq!(net.flow(a), 0);
    }
}
