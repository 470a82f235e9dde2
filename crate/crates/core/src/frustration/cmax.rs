//! Maximal commuting subsets of `P(H)` with consistent signs.
//!
//! Every stabilizer state's nonzero characters on `P(H)` live on a set of
//! pairwise commuting terms. The minimum energy is attained by fixing the
//! signs of a basis of a maximal commuting clique's span: refining a group by
//! `+u` or `-u` averages to the coarser codespace energy, so one of the two is
//! no worse. A subset therefore records the terms whose sign it fixes to `+`
//! (members) and to `-` (anti-members). An all-`+` choice is only available
//! when it does not force `-1`, which is how `{XX, YY, ZZ}` is excluded.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::PauliString;
use crate::stabilizer::group::{complement_vector, Insert, SignedBasis};
use crate::stabilizer::StabilizerState;

pub const CMAX_BUDGET: usize = 30;
const SIGN_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutingSubset {
    /// Term indices `P` with `+P` in the group.
    pub members: Vec<usize>,
    /// Term indices `P` with `-P` in the group.
    pub anti_members: Vec<usize>,
    /// Independent signed generators of the group.
    pub generators: Vec<PauliString>,
    /// `sum_members w - sum_anti w`, so the energy is `offset - total_weight`.
    pub total_weight: f64,
}

impl CommutingSubset {
    pub fn energy(&self, h: &PauliHamiltonian) -> f64 {
        h.offset() - self.total_weight
    }

    /// A pure stabilizer state in the codespace with energy `energy(h)`,
    /// found by fixing logical signs one at a time.
    pub fn witness_state(&self, h: &PauliHamiltonian) -> StabilizerState {
        let mut basis = SignedBasis::new(h.n());
        for g in &self.generators {
            basis.insert(g);
        }
        while let Some(e) = complement_vector(&basis) {
            let mut plus = basis.clone();
            plus.insert(&e);
            let mut minus = basis;
            minus.insert(&e.negated());
            basis = if codespace_energy(h, &minus) < codespace_energy(h, &plus) { minus } else { plus };
        }
        StabilizerState::from_basis(basis)
    }
}

/// Energy of the maximally mixed state on the codespace.
fn codespace_energy(h: &PauliHamiltonian, basis: &SignedBasis) -> f64 {
    h.offset() - h.terms().iter().map(|t| t.weight * basis.character(&t.pauli) as f64).sum::<f64>()
}

fn commute_masks(h: &PauliHamiltonian) -> Vec<u64> {
    let p = h.paulis();
    (0..p.len())
        .map(|i| (0..p.len()).filter(|&j| j != i && p[i].commutes_unchecked(&p[j])).fold(0u64, |m, j| m | 1 << j))
        .collect()
}

/// Bron-Kerbosch with pivoting; cliques come out sorted by mask.
fn maximal_cliques(adj: &[u64]) -> Vec<u64> {
    fn rec(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let px = p | x;
        let pivot = (0..adj.len()).filter(|&u| px >> u & 1 == 1).max_by_key(|&u| (adj[u] & p).count_ones()).unwrap();
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            rec(adj, r | 1 << v, p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let m = adj.len();
    let all = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    let mut out = Vec::new();
    rec(adj, 0, all, 0, &mut out);
    out.sort_unstable();
    out
}

/// A clique with a basis of its span chosen among its own terms. Each term
/// carries its character under the all-`+` basis and the set of basis
/// elements whose sign flips it.
struct Clique {
    terms: Vec<usize>,
    basis: Vec<usize>,
    chars: Vec<(i8, u64)>,
}

impl Clique {
    fn new(h: &PauliHamiltonian, mask: u64) -> Clique {
        let paulis = h.paulis();
        let terms: Vec<usize> = (0..paulis.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let mut span = SignedBasis::new(h.n());
        let mut basis = Vec::new();
        for &i in &terms {
            if let Insert::Added = span.insert(&paulis[i]) {
                basis.push(i);
            }
        }
        let flipped: Vec<SignedBasis> = (0..basis.len())
            .map(|k| {
                let mut b = SignedBasis::new(h.n());
                for (j, &i) in basis.iter().enumerate() {
                    b.insert(&paulis[i].with_negative(paulis[i].is_negative() != (j == k)));
                }
                b
            })
            .collect();
        let chars = terms
            .iter()
            .map(|&i| {
                let base = span.character(&paulis[i]);
                let m = flipped.iter().enumerate().filter(|(_, b)| b.character(&paulis[i]) != base).fold(0u64, |m, (k, _)| m | 1 << k);
                (base, m)
            })
            .collect();
        Clique { terms, basis, chars }
    }

    fn weight(&self, w: &[f64], signs: u64) -> f64 {
        self.terms
            .iter()
            .zip(&self.chars)
            .map(|(&i, &(c, m))| if ((m & signs).count_ones() % 2 == 1) == (c < 0) { w[i] } else { -w[i] })
            .sum()
    }

    fn subset(&self, h: &PauliHamiltonian, signs: u64) -> CommutingSubset {
        let w = h.weights();
        let paulis = h.paulis();
        let mut members = Vec::new();
        let mut anti_members = Vec::new();
        for (&i, &(c, m)) in self.terms.iter().zip(&self.chars) {
            if ((m & signs).count_ones() % 2 == 1) == (c < 0) {
                members.push(i);
            } else {
                anti_members.push(i);
            }
        }
        let generators = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, &i)| if signs >> k & 1 == 1 { paulis[i].negated() } else { paulis[i] })
            .collect();
        CommutingSubset { members, anti_members, generators, total_weight: self.weight(&w, signs) }
    }
}

fn cliques(h: &PauliHamiltonian) -> Result<Vec<Clique>> {
    if h.len() > CMAX_BUDGET {
        return Err(Error::Budget { what: "cmax terms", size: h.len(), budget: CMAX_BUDGET });
    }
    let cl: Vec<Clique> = maximal_cliques(&commute_masks(h)).into_iter().map(|m| Clique::new(h, m)).collect();
    if let Some(c) = cl.iter().find(|c| c.basis.len() > SIGN_BUDGET) {
        return Err(Error::Budget { what: "cmax clique rank", size: c.basis.len(), budget: SIGN_BUDGET });
    }
    Ok(cl)
}

/// Every maximal commuting clique of `P(H)` with every sign choice on a basis
/// of its span.
pub fn enumerate_cmax(h: &PauliHamiltonian) -> Result<Vec<CommutingSubset>> {
    let mut out = Vec::new();
    for c in cliques(h)? {
        for signs in 0..(1u64 << c.basis.len()) {
            out.push(c.subset(h, signs));
        }
    }
    Ok(out)
}

/// The subset of largest total weight; ties keep the first clique and the
/// smallest sign mask.
pub fn max_cmax_subset(h: &PauliHamiltonian) -> Result<CommutingSubset> {
    let w = h.weights();
    let mut best: Option<(f64, usize, u64)> = None;
    let cl = cliques(h)?;
    for (k, c) in cl.iter().enumerate() {
        for signs in 0..(1u64 << c.basis.len()) {
            let v = c.weight(&w, signs);
            if best.map_or(true, |b| v > b.0 + 1e-12) {
                best = Some((v, k, signs));
            }
        }
    }
    let (_, k, signs) = best.expect("at least one clique");
    Ok(cl[k].subset(h, signs))
}
