//! Dinic max-flow with exact rational capacities (strongly polynomial, so
//! exact arithmetic terminates).

use num::{BigRational, Signed, Zero};

#[derive(Clone)]
struct Edge {
    to: usize,
    cap: BigRational,
    flow: BigRational,
}

pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: BigRational) {
        debug_assert!(!cap.is_negative());
        let id = self.edges.len();
        self.edges.push(Edge {
            to,
            cap,
            flow: BigRational::zero(),
        });
        self.edges.push(Edge {
            to: from,
            cap: BigRational::zero(),
            flow: BigRational::zero(),
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    fn residual(&self, e: usize) -> BigRational {
        &self.edges[e].cap - &self.edges[e].flow
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> BigRational {
        let mut total = BigRational::zero();
        loop {
            let level = self.bfs_levels(s);
            if level[t].is_none() {
                return total;
            }
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs_push(s, t, None, &level, &mut iter);
                if pushed.is_zero() {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn bfs_levels(&self, s: usize) -> Vec<Option<u32>> {
        let mut level = vec![None; self.adj.len()];
        level[s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let to = self.edges[e].to;
                if level[to].is_none() && self.residual(e).is_positive() {
                    level[to] = Some(level[v].unwrap() + 1);
                    queue.push_back(to);
                }
            }
        }
        level
    }

    fn dfs_push(
        &mut self,
        v: usize,
        t: usize,
        limit: Option<BigRational>,
        level: &[Option<u32>],
        iter: &mut [usize],
    ) -> BigRational {
        if v == t {
            return limit.expect("sink reached with unlimited budget");
        }
        while iter[v] < self.adj[v].len() {
            let e = self.adj[v][iter[v]];
            let to = self.edges[e].to;
            let res = self.residual(e);
            if res.is_positive() && level[to].is_some() && level[to] == level[v].map(|l| l + 1) {
                let pass = match &limit {
                    None => Some(res.clone()),
                    Some(l) => Some(res.clone().min(l.clone())),
                };
                let pushed = self.dfs_push(to, t, pass, level, iter);
                if pushed.is_positive() {
                    self.edges[e].flow += &pushed;
                    self.edges[e ^ 1].flow -= &pushed;
                    return pushed;
                }
            }
            iter[v] += 1;
        }
        BigRational::zero()
    }

    /// Nodes reachable from `s` in the residual graph (the source side of a
    /// minimum cut, once `max_flow` has run).
    pub fn min_cut_side(&self, s: usize) -> Vec<bool> {
        let mut side = vec![false; self.adj.len()];
        side[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let to = self.edges[e].to;
                if !side[to] && self.residual(e).is_positive() {
                    side[to] = true;
                    queue.push_back(to);
                }
            }
        }
        side
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn ratf(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_network() {
        // s=0, t=3; two paths with bottlenecks 1/2 and 1/3
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, ratf(1, 2));
        net.add_edge(1, 3, rat(5));
        net.add_edge(0, 2, rat(7));
        net.add_edge(2, 3, ratf(1, 3));
        assert_eq!(net.max_flow(0, 3), ratf(5, 6));
        let side = net.min_cut_side(0);
        assert!(side[0] && side[2] && !side[1] && !side[3]);
    }

    #[test]
    fn disconnected() {
        let mut net = FlowNetwork::new(3);
        net.add_edge(0, 1, rat(1));
        assert!(net.max_flow(0, 2).is_zero());
    }
}
