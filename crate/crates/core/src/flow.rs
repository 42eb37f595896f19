//! Max-flow and bipartite matching used by the lifting algorithm.
//!
//! Both prefer the lowest-index edge whenever there is a choice, so results
//! are reproducible.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: u64,
}

/// Dinic's algorithm on a small directed graph.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds an edge and returns its id, usable with [`FlowNetwork::flow_on`].
    pub fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently routed through edge `id`.
    pub fn flow_on(&self, id: usize) -> u64 {
        self.edges[id + 1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// Finds a perfect matching of a bipartite graph given as adjacency lists
/// (left vertex -> right vertices, each side of size `adj.len()`), using
/// augmenting paths. Returns `match_of_left`.
pub fn perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    const NONE: usize = usize::MAX;
    let mut left = vec![NONE; n];
    let mut right = vec![NONE; n];
    // Greedy start, then augment.
    for u in 0..n {
        if let Some(&v) = adj[u].iter().find(|&&v| right[v] == NONE) {
            left[u] = v;
            right[v] = u;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for u in 0..n {
        if left[u] != NONE {
            continue;
        }
        // Iterative DFS for an augmenting path from u.
        let mut stack: Vec<(usize, usize)> = vec![(u, 0)];
        let mut found = false;
        while let Some(&mut (x, ref mut pos)) = stack.last_mut() {
            if *pos >= adj[x].len() {
                stack.pop();
                continue;
            }
            let v = adj[x][*pos];
            *pos += 1;
            if seen[v] == u {
                continue;
            }
            seen[v] = u;
            if right[v] == NONE {
                // Each stack entry's last tried edge lies on the path.
                for &(x, pos) in &stack {
                    let v = adj[x][pos - 1];
                    left[x] = v;
                    right[v] = x;
                }
                found = true;
                break;
            }
            stack.push((right[v], 0));
        }
        if !found {
            return None;
        }
    }
    Some(left)
}
