//! Stabilizer polytope membership.
//!
//! The linear program works in Pauli-expectation coordinates: it minimizes
//! `t` subject to `|sum_S p_S chi_S(P) - tr(P rho)| <= t` for every
//! non-identity pattern, `p >= 0`, `sum p = 1`. The optimum is the
//! infinity-norm distance from `rho` to the polytope in those coordinates.

use std::sync::OnceLock;

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use serde::Serialize;

use super::density::DensityMatrix;
use super::enumerate::{pure_states, MAX_ENUMERATION_QUBITS};
use crate::error::{Error, Result};
use crate::pauli::{all_patterns, PauliString};

pub const BOUNDARY_TOL: f64 = 1e-8;
const INSIDE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Mixture weights over `pure_states(n)` indices (nonzero entries only).
    Inside { weights: Vec<(usize, f64)> },
    Boundary { margin: f64, weights: Vec<(usize, f64)> },
    Outside { margin: f64 },
}

impl Membership {
    pub fn margin(&self) -> f64 {
        match self {
            Membership::Inside { .. } => 0.0,
            Membership::Boundary { margin, .. } | Membership::Outside { margin } => *margin,
        }
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, Membership::Outside { .. })
    }

    fn classify(margin: f64, weights: Vec<(usize, f64)>) -> Membership {
        if margin <= INSIDE_TOL {
            Membership::Inside { weights }
        } else if margin < BOUNDARY_TOL {
            Membership::Boundary { margin, weights }
        } else {
            Membership::Outside { margin }
        }
    }
}

struct CharacterTable {
    patterns: Vec<PauliString>,
    // chi[v][j] for non-identity pattern j
    chi: Vec<Vec<i8>>,
}

fn table(n: usize) -> &'static CharacterTable {
    static TABLES: [OnceLock<CharacterTable>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[n - 1].get_or_init(|| {
        let patterns: Vec<PauliString> = all_patterns(n).into_iter().skip(1).collect();
        let chi = pure_states(n)
            .iter()
            .map(|s| patterns.iter().map(|p| s.expectation_unchecked(p)).collect())
            .collect();
        CharacterTable { patterns, chi }
    })
}

fn check(rho: &DensityMatrix) -> Result<usize> {
    let n = rho.n();
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_ENUMERATION_QUBITS));
    }
    Ok(n)
}

/// Membership in the stabilizer polytope. Single qubits use the octahedron
/// facets `|r|_1 <= 1`; two and three qubits solve the linear program.
pub fn polytope_membership(rho: &DensityMatrix) -> Result<Membership> {
    if check(rho)? == 1 {
        return Ok(qubit_membership(rho.bloch()?));
    }
    polytope_membership_lp(rho)
}

pub fn polytope_membership_lp(rho: &DensityMatrix) -> Result<Membership> {
    let n = check(rho)?;
    let tab = table(n);
    let r: Vec<f64> = tab.patterns.iter().map(|p| rho.expectation(p)).collect::<Result<_>>()?;

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = tab.chi.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    for (j, &rj) in r.iter().enumerate() {
        let mut lo = LinearExpr::empty();
        let mut hi = LinearExpr::empty();
        for (v, row) in vars.iter().zip(&tab.chi) {
            if row[j] != 0 {
                lo.add(*v, row[j] as f64);
                hi.add(*v, row[j] as f64);
            }
        }
        lo.add(t, 1.0);
        hi.add(t, -1.0);
        lp.add_constraint(lo, ComparisonOp::Ge, rj);
        lp.add_constraint(hi, ComparisonOp::Le, rj);
    }
    let mut total = LinearExpr::empty();
    for v in &vars {
        total.add(*v, 1.0);
    }
    lp.add_constraint(total, ComparisonOp::Eq, 1.0);

    let outcome = lp.solve().map_err(|e| Error::Lp(format!("{e:?}")))?;
    let sol = outcome.into_solution().map_err(|_| Error::Lp("interrupted".into()))?;
    let weights = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (i, sol.var_value(*v)))
        .filter(|&(_, w)| w > 1e-14)
        .collect();
    Ok(Membership::classify(sol.objective().max(0.0), weights))
}

/// Octahedron test with the exact infinity-norm distance as margin.
pub fn qubit_membership(r: [f64; 3]) -> Membership {
    let a: Vec<f64> = r.iter().map(|v| v.abs()).collect();
    let l1: f64 = a.iter().sum();
    if l1 > 1.0 {
        // distance t solves sum_i max(|r_i| - t, 0) = 1
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| y.total_cmp(x));
        let mut margin = 0.0;
        for k in 1..=3 {
            let t = (sorted[..k].iter().sum::<f64>() - 1.0) / k as f64;
            let next = if k < 3 { sorted[k] } else { 0.0 };
            if t <= sorted[k - 1] && t >= next {
                margin = t;
                break;
            }
        }
        let weights = if margin < BOUNDARY_TOL { qubit_weights(r) } else { Vec::new() };
        return Membership::classify(margin, weights);
    }
    Membership::Inside { weights: qubit_weights(r) }
}

/// Decomposition `sum |r_i| |sign(r_i) e_i> + (1 - |r|_1)(|+z> + |-z>)/2`.
fn qubit_weights(r: [f64; 3]) -> Vec<(usize, f64)> {
    let states = pure_states(1);
    let index = |letter: &str, neg: bool| {
        let p: PauliString = letter.parse().unwrap();
        states.iter().position(|s| s.expectation_unchecked(&p) == if neg { -1 } else { 1 }).unwrap()
    };
    let l1: f64 = r.iter().map(|v| v.abs()).sum();
    let rest = (1.0 - l1).max(0.0) / 2.0;
    let mut w = vec![0.0; states.len()];
    for (k, letter) in ["X", "Y", "Z"].iter().enumerate() {
        w[index(letter, r[k] < 0.0)] += r[k].abs();
    }
    w[index("Z", false)] += rest;
    w[index("Z", true)] += rest;
    w.into_iter().enumerate().filter(|&(_, v)| v > 0.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::group::StabilizerState;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn reconstruct(n: usize, weights: &[(usize, f64)]) -> DMatrix<Complex64> {
        let dim = 1 << n;
        let mut m = DMatrix::zeros(dim, dim);
        for &(i, w) in weights {
            let v = pure_states(n)[i].state_vector().unwrap();
            m += &v * v.adjoint() * Complex64::new(w, 0.0);
        }
        m
    }

    #[test]
    fn maximally_mixed_is_inside() {
        for n in 1..=3 {
            let rho = DensityMatrix::maximally_mixed(n);
            match polytope_membership(&rho).unwrap() {
                Membership::Inside { weights } => {
                    let m = reconstruct(n, &weights);
                    assert!((m - rho.matrix()).iter().all(|v| v.norm() < 1e-8));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn t_state_is_outside() {
        let s = 1.0 / 3f64.sqrt();
        let rho = DensityMatrix::from_bloch([s, s, s]).unwrap();
        let fast = polytope_membership(&rho).unwrap();
        let lp = polytope_membership_lp(&rho).unwrap();
        assert!(fast.is_outside() && lp.is_outside());
        assert!((fast.margin() - lp.margin()).abs() < 1e-9);
        assert!((fast.margin() - (3f64.sqrt() - 1.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_vertices_are_inside() {
        let s = StabilizerState::from_generators(vec!["+XXI".parse().unwrap(), "-ZZI".parse().unwrap(), "+IIY".parse().unwrap()]).unwrap();
        let rho = DensityMatrix::from_pure(&s.state_vector().unwrap()).unwrap();
        assert!(matches!(polytope_membership(&rho).unwrap(), Membership::Inside { .. }));
    }
}
