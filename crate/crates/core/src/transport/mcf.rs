//! Min-cost flow by successive shortest paths with Dijkstra and node
//! potentials, over checked 128-bit integers.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: i128,
    cost: i128,
}

#[derive(Clone, Debug)]
pub(crate) struct MinCostFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    // original capacity of each forward edge, to read flows back
    orig: Vec<i128>,
    // keeps reduced costs of residual edges non-negative across runs
    potential: Vec<i128>,
}

impl MinCostFlow {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            orig: Vec::new(),
            potential: vec![0; n],
        }
    }

    /// Adds `u -> v` with the given capacity and non-negative cost; returns
    /// an id for [`MinCostFlow::flow`].
    pub(crate) fn add_edge(&mut self, u: usize, v: usize, cap: i128, cost: i128) -> usize {
        debug_assert!(cost >= 0 && cap >= 0);
        let id = self.edges.len();
        self.edges.push(Edge { to: v, cap, cost });
        self.edges.push(Edge {
            to: u,
            cap: 0,
            cost: -cost,
        });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        self.orig.push(cap);
        id
    }

    pub(crate) fn flow(&self, id: usize) -> i128 {
        self.orig[id / 2] - self.edges[id].cap
    }

    /// Sends up to `limit` units from `s` to `t` at minimum cost. Returns
    /// `(flow, cost)`.
    pub(crate) fn run(&mut self, s: usize, t: usize, limit: i128) -> Result<(i128, i128)> {
        let n = self.adj.len();
        let potential = &mut self.potential;
        let (mut flow, mut cost) = (0i128, 0i128);
        while flow < limit {
            let mut dist: Vec<Option<i128>> = vec![None; n];
            let mut prev_edge = vec![usize::MAX; n];
            let mut done = vec![false; n];
            dist[s] = Some(0);
            // dense graph: O(V^2) Dijkstra without a heap
            loop {
                let mut u = None;
                for v in 0..n {
                    if done[v] {
                        continue;
                    }
                    if let Some(dv) = dist[v] {
                        if u.is_none_or(|w: usize| dv < dist[w].unwrap()) {
                            u = Some(v);
                        }
                    }
                }
                let Some(u) = u else { break };
                done[u] = true;
                let du = dist[u].unwrap();
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap == 0 || done[edge.to] {
                        continue;
                    }
                    let reduced = edge
                        .cost
                        .checked_add(potential[u])
                        .and_then(|c| c.checked_sub(potential[edge.to]))
                        .ok_or(Error::Overflow)?;
                    debug_assert!(reduced >= 0);
                    let nd = du.checked_add(reduced).ok_or(Error::Overflow)?;
                    if dist[edge.to].is_none_or(|d| nd < d) {
                        dist[edge.to] = Some(nd);
                        prev_edge[edge.to] = e;
                    }
                }
            }
            let Some(_) = dist[t] else { break };
            for v in 0..n {
                if let Some(d) = dist[v] {
                    potential[v] = potential[v].checked_add(d).ok_or(Error::Overflow)?;
                }
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = prev_edge[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                let step = push.checked_mul(self.edges[e].cost).ok_or(Error::Overflow)?;
                cost = cost.checked_add(step).ok_or(Error::Overflow)?;
                v = self.edges[e ^ 1].to;
            }
            flow += push;
        }
        Ok((flow, cost))
    }
}
