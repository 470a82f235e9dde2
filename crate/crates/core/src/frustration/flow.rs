//! Dinic max-flow, generic over the capacity type so the bipartite MWIS
//! reduction can run in exact rational arithmetic.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

pub trait FlowWeight: Clone + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> {
    /// Residual capacities at or below this are treated as saturated.
    fn is_positive(&self) -> bool;

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl FlowWeight for f64 {
    fn is_positive(&self) -> bool {
        *self > 1e-12
    }
}

impl FlowWeight for Ratio<i64> {
    fn is_positive(&self) -> bool {
        *self > Ratio::zero()
    }
}

impl FlowWeight for Ratio<i128> {
    fn is_positive(&self) -> bool {
        *self > Ratio::zero()
    }
}

struct Edge<W> {
    to: usize,
    cap: W,
}

pub(crate) struct Network<W> {
    edges: Vec<Edge<W>>,
    out: Vec<Vec<usize>>,
}

impl<W: FlowWeight> Network<W> {
    pub fn new(nodes: usize) -> Network<W> {
        Network { edges: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize, cap: W) {
        self.out[a].push(self.edges.len());
        self.edges.push(Edge { to: b, cap });
        self.out[b].push(self.edges.len());
        self.edges.push(Edge { to: a, cap: W::zero() });
    }

    fn levels(&self, s: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.out.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out[u] {
                let v = self.edges[e].to;
                if level[v].is_none() && self.edges[e].cap.is_positive() {
                    level[v] = Some(level[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn push(&mut self, u: usize, t: usize, limit: W, level: &[Option<usize>], next: &mut [usize]) -> W {
        if u == t {
            return limit;
        }
        while next[u] < self.out[u].len() {
            let e = self.out[u][next[u]];
            let v = self.edges[e].to;
            if self.edges[e].cap.is_positive() && level[v] == level[u].map(|l| l + 1) {
                let pushed = self.push(v, t, W::min_of(&limit, &self.edges[e].cap), level, next);
                if pushed.is_positive() {
                    self.edges[e].cap = self.edges[e].cap.clone() - pushed.clone();
                    self.edges[e ^ 1].cap = self.edges[e ^ 1].cap.clone() + pushed.clone();
                    return pushed;
                }
            }
            next[u] += 1;
        }
        W::zero()
    }

    /// Maximum flow value and the source side of a minimum cut.
    pub fn max_flow(&mut self, s: usize, t: usize, infinity: W) -> (W, Vec<bool>) {
        let mut total = W::zero();
        loop {
            let level = self.levels(s);
            if level[t].is_none() {
                let side = level.iter().map(Option::is_some).collect();
                return (total, side);
            }
            let mut next = vec![0; self.out.len()];
            loop {
                let f = self.push(s, t, infinity.clone(), &level, &mut next);
                if !f.is_positive() {
                    break;
                }
                total = total + f;
            }
        }
    }
}
