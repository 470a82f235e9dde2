//! Exact maximum-weight independent sets.

use serde::Serialize;

use super::flow::{FlowWeight, Network};
use super::FrustrationGraph;
use crate::error::{Error, Result};

pub const MWIS_BUDGET: usize = 40;
const EXHAUSTIVE_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependentSet {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub weight: f64,
}

fn tie_tol(w: f64) -> f64 {
    1e-9 * (1.0 + w.abs())
}

struct Solver<'a> {
    weights: &'a [f64],
    // neighbourhoods as bit masks
    adj: Vec<u64>,
    // vertices in descending weight order, for branching and the cover bound
    order: Vec<usize>,
    best: f64,
}

impl Solver<'_> {
    /// Greedy partition of `cand` into cliques; the sum of per-clique maxima
    /// bounds any independent set inside `cand`.
    fn clique_cover_bound(&self, cand: u64) -> f64 {
        let mut classes: Vec<(u64, f64)> = Vec::new();
        for &v in &self.order {
            if cand >> v & 1 == 0 {
                continue;
            }
            match classes.iter_mut().find(|(members, _)| members & !self.adj[v] == 0) {
                Some(c) => c.0 |= 1 << v,
                None => classes.push((1 << v, self.weights[v])),
            }
        }
        classes.iter().map(|c| c.1).sum()
    }

    fn greedy(&self, mut cand: u64) -> f64 {
        let mut w = 0.0;
        for &v in &self.order {
            if cand >> v & 1 == 1 {
                w += self.weights[v];
                cand &= !self.adj[v] & !(1 << v);
            }
        }
        w
    }

    fn search(&mut self, cand: u64, current: f64) {
        if cand == 0 {
            if current > self.best {
                self.best = current;
            }
            return;
        }
        if current + self.clique_cover_bound(cand) <= self.best {
            return;
        }
        let v = *self.order.iter().find(|&&v| cand >> v & 1 == 1).unwrap();
        self.search(cand & !self.adj[v] & !(1 << v), current + self.weights[v]);
        self.search(cand & !(1 << v), current);
    }

    fn solve(&mut self, cand: u64) -> f64 {
        self.best = self.greedy(cand);
        self.search(cand, 0.0);
        self.best
    }
}

fn masks(g: &FrustrationGraph) -> Vec<u64> {
    g.adjacency.iter().map(|nb| nb.iter().fold(0u64, |m, &j| m | 1 << j)).collect()
}

fn check_weights(g: &FrustrationGraph) -> Result<()> {
    if g.weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidHamiltonian("vertex weights must be finite and nonnegative".into()));
    }
    Ok(())
}

/// Branch and bound with a greedy lower bound and a weighted clique-cover
/// upper bound. Among optimal sets the one whose indicator vector is
/// lexicographically largest wins; with positive weights that is the
/// lexicographically smallest sorted index list.
pub fn mwis_exact(g: &FrustrationGraph) -> Result<IndependentSet> {
    let m = g.len();
    if m > MWIS_BUDGET {
        return Err(Error::Budget { what: "mwis vertices", size: m, budget: MWIS_BUDGET });
    }
    check_weights(g)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| g.weights[b].total_cmp(&g.weights[a]).then(a.cmp(&b)));
    let mut solver = Solver { weights: &g.weights, adj: masks(g), order, best: 0.0 };
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let target = solver.solve(all);
    let tol = tie_tol(target);

    let mut chosen = Vec::new();
    let mut weight = 0.0;
    let mut blocked = 0u64;
    for v in 0..m {
        if blocked >> v & 1 == 1 {
            continue;
        }
        // vertices after v that stay compatible with the chosen set plus v
        let later = all & !((1u64 << v) | ((1u64 << v) - 1));
        let rest = later & !blocked & !solver.adj[v];
        if weight + g.weights[v] + solver.solve(rest) >= target - tol {
            chosen.push(v);
            weight += g.weights[v];
            blocked |= solver.adj[v];
        }
        blocked |= 1 << v;
    }
    Ok(IndependentSet { vertices: chosen, weight })
}

/// Full `2^V` sweep with the same tie-break, used as an oracle.
pub fn mwis_exhaustive(g: &FrustrationGraph) -> Result<IndependentSet> {
    let m = g.len();
    if m > EXHAUSTIVE_BUDGET {
        return Err(Error::Budget { what: "exhaustive mwis vertices", size: m, budget: EXHAUSTIVE_BUDGET });
    }
    check_weights(g)?;
    let adj = masks(g);
    let mut scored = Vec::new();
    for set in 0u64..(1 << m) {
        let independent = (0..m).all(|v| set >> v & 1 == 0 || adj[v] & set == 0);
        if independent {
            let w: f64 = (0..m).filter(|&v| set >> v & 1 == 1).map(|v| g.weights[v]).sum();
            scored.push((set, w));
        }
    }
    let best = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = tie_tol(best);
    let (set, weight) = scored.into_iter().filter(|s| s.1 >= best - tol).max_by_key(|s| s.0.reverse_bits()).unwrap();
    Ok(IndependentSet { vertices: (0..m).filter(|&v| set >> v & 1 == 1).collect(), weight })
}

/// Min-cut reduction on a bipartite graph in any exact or floating weight
/// type. Returns `None` when the graph is not bipartite.
pub fn mwis_bipartite_with<W: FlowWeight>(g: &FrustrationGraph, weights: &[W]) -> Option<(Vec<usize>, W)> {
    let colour = g.bipartition()?;
    let m = g.len();
    let (s, t) = (m, m + 1);
    let mut total = W::zero();
    for w in weights {
        total = total + w.clone();
    }
    let infinity = total.clone() + total.clone() + W::one();
    let mut net = Network::new(m + 2);
    for v in 0..m {
        if colour[v] {
            net.add_edge(v, t, weights[v].clone());
        } else {
            net.add_edge(s, v, weights[v].clone());
            for &u in &g.adjacency[v] {
                net.add_edge(v, u, infinity.clone());
            }
        }
    }
    let (cut, side) = net.max_flow(s, t, infinity);
    // left vertices kept on the source side, right vertices cut off from it
    let set = (0..m).filter(|&v| side[v] != colour[v]).collect();
    Some((set, total - cut))
}

pub fn mwis_bipartite(g: &FrustrationGraph) -> Result<Option<IndependentSet>> {
    check_weights(g)?;
    Ok(mwis_bipartite_with(g, &g.weights).map(|(vertices, _)| {
        let weight = vertices.iter().map(|&v| g.weights[v]).sum();
        IndependentSet { vertices, weight }
    }))
}
