//! Frustration (anticommutation) graphs of Pauli Hamiltonians and the
//! combinatorial solvers built on them.

mod cmax;
mod flow;
mod mwis;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::PauliString;
use crate::stabilizer::group::PatternBasis;
use crate::stabilizer::StabilizerGroup;

pub use cmax::{enumerate_cmax, max_cmax_subset, CommutingSubset, CMAX_BUDGET};
pub use flow::FlowWeight;
pub use mwis::{mwis_bipartite, mwis_bipartite_with, mwis_exact, mwis_exhaustive, IndependentSet, MWIS_BUDGET};

/// Vertices are the terms of `H` in term order; edges join anticommuting pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrustrationGraph {
    pub vertices: Vec<PauliString>,
    pub weights: Vec<f64>,
    pub adjacency: Vec<Vec<usize>>,
}

impl FrustrationGraph {
    pub fn new(h: &PauliHamiltonian) -> FrustrationGraph {
        let vertices = h.paulis();
        let m = vertices.len();
        let mut adjacency = vec![Vec::new(); m];
        for i in 0..m {
            for j in i + 1..m {
                if !vertices[i].commutes_unchecked(&vertices[j]) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        FrustrationGraph { vertices, weights: h.weights(), adjacency }
    }

    /// A bare weighted graph without Pauli labels, for solver tests.
    pub fn from_edges(weights: Vec<f64>, edges: &[(usize, usize)]) -> FrustrationGraph {
        let m = weights.len();
        let mut adjacency = vec![Vec::new(); m];
        for &(a, b) in edges {
            if a != b && !adjacency[a].contains(&b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
        }
        FrustrationGraph { vertices: Vec::new(), weights, adjacency }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nb) in self.adjacency.iter().enumerate() {
            out.extend(nb.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| set.iter().all(|j| !self.adjacency[i].contains(j)))
    }

    /// Two-colouring when the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let m = self.len();
        let mut colour: Vec<Option<bool>> = vec![None; m];
        for s in 0..m {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for &v in &self.adjacency[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    /// Edge list text: `v <index> <label> <weight>` lines then `e <a> <b>` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for i in 0..self.len() {
            let label = self.vertices.get(i).map(|p| p.to_string()).unwrap_or_else(|| i.to_string());
            writeln!(s, "v {i} {label} {}", self.weights[i]).unwrap();
        }
        for (a, b) in self.edges() {
            writeln!(s, "e {a} {b}").unwrap();
        }
        s
    }
}

/// Alias for [`FrustrationGraph::new`].
pub fn build_graph(h: &PauliHamiltonian) -> FrustrationGraph {
    FrustrationGraph::new(h)
}

/// Checks that `H = sum_j w_j H_j` where the terms assigned to `H_j` are
/// elements of `S_j` that generate it with a common weight, and that no
/// group's patterns meet the span of the others. Independence is decided at
/// the pattern level by rank counting. Generating sets may be overcomplete,
/// as for the periodic Ising bonds.
pub fn is_sum_of_stabilizers(h: &PauliHamiltonian, groups: &[StabilizerGroup]) -> Result<bool> {
    for g in groups {
        if g.n() != h.n() {
            return Err(Error::QubitMismatch(h.n(), g.n()));
        }
    }
    let mut spans: Vec<PatternBasis> = vec![PatternBasis::new(); groups.len()];
    let mut weights: Vec<Option<f64>> = vec![None; groups.len()];
    for t in h.terms() {
        let owners: Vec<usize> = (0..groups.len()).filter(|&j| groups[j].contains(&t.pauli)).collect();
        let [j] = owners[..] else { return Ok(false) };
        spans[j].insert(&t.pauli);
        match weights[j] {
            None => weights[j] = Some(t.weight),
            Some(w) if (w - t.weight).abs() > 1e-12 * w.max(1.0) => return Ok(false),
            _ => {}
        }
    }
    if spans.iter().zip(groups).any(|(s, g)| s.rank() != g.rank()) {
        return Ok(false);
    }
    for j in 0..groups.len() {
        let mut others = PatternBasis::new();
        for (k, g) in groups.iter().enumerate() {
            if k != j {
                for gen in g.generators() {
                    others.insert(gen);
                }
            }
        }
        let before = others.rank();
        for gen in groups[j].generators() {
            others.insert(gen);
        }
        if others.rank() != before + groups[j].rank() {
            return Ok(false);
        }
    }
    Ok(true)
}
