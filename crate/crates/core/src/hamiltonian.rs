//! Weighted Pauli Hamiltonians `H = c I - sum_P w_P P` with every `w_P > 0`.
//!
//! Coefficient signs are folded into the stored Pauli signs, so the support
//! `P(H)` is a set of signed Paulis and all weights are positive.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{PauliString, MAX_DENSE_QUBITS};
use crate::stabilizer::{DensityMatrix, StabilizerGroup, StabilizerState};

pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub pauli: PauliString,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliHamiltonian {
    n: usize,
    terms: Vec<Term>,
    offset: f64,
}

/// On-disk form: `{"n": 2, "terms": [{"coeff": -1.0, "pauli": "ZZ"}]}` meaning
/// `H = sum coeff * pauli`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianDoc {
    pub n: usize,
    pub terms: Vec<DocTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocTerm {
    pub coeff: f64,
    pub pauli: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalityReport {
    pub term_count: usize,
    pub max_support: usize,
    pub is_sparse: bool,
    pub is_k_local: bool,
}

impl PauliHamiltonian {
    /// Builds `H = sum_k c_k P_k`, merging repeated patterns. Zero input
    /// coefficients are rejected; merged terms that cancel are dropped.
    pub fn from_coefficients(n: usize, pairs: impl IntoIterator<Item = (f64, PauliString)>) -> Result<PauliHamiltonian> {
        let mut net: BTreeMap<String, (PauliString, f64)> = BTreeMap::new();
        let mut offset = 0.0;
        for (c, p) in pairs {
            if p.n() != n {
                return Err(Error::QubitMismatch(n, p.n()));
            }
            if c == 0.0 {
                return Err(Error::ZeroCoefficient(p.to_string()));
            }
            if !c.is_finite() {
                return Err(Error::InvalidHamiltonian(format!("non-finite coefficient on {p}")));
            }
            let c = c * p.sign();
            if p.is_identity_pattern() {
                offset += c;
                continue;
            }
            net.entry(p.letters()).or_insert((p.pattern(), 0.0)).1 += c;
        }
        let terms = net
            .into_values()
            .filter(|(_, c)| c.abs() > 1e-14)
            .map(|(p, c)| Term { pauli: p.with_negative(c > 0.0), weight: c.abs() })
            .collect();
        Ok(PauliHamiltonian { n, terms, offset })
    }

    /// Builds `H = -sum w_P P` from positive weights.
    pub fn from_weights(n: usize, pairs: impl IntoIterator<Item = (PauliString, f64)>) -> Result<PauliHamiltonian> {
        let mut coeffs = Vec::new();
        for (p, w) in pairs {
            if !(w > 0.0) {
                return Err(Error::InvalidHamiltonian(format!("weight {w} on {p} is not positive")));
            }
            coeffs.push((-w, p));
        }
        PauliHamiltonian::from_coefficients(n, coeffs)
    }

    pub fn from_doc(doc: &HamiltonianDoc) -> Result<PauliHamiltonian> {
        let pairs = doc
            .terms
            .iter()
            .map(|t| Ok((t.coeff, t.pauli.parse::<PauliString>()?)))
            .collect::<Result<Vec<_>>>()?;
        PauliHamiltonian::from_coefficients(doc.n, pairs)
    }

    pub fn parse_json(text: &str) -> Result<PauliHamiltonian> {
        PauliHamiltonian::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> HamiltonianDoc {
        let mut terms: Vec<DocTerm> =
            self.terms.iter().map(|t| DocTerm { coeff: -t.weight * t.pauli.sign(), pauli: t.pauli.letters() }).collect();
        if self.offset != 0.0 {
            terms.push(DocTerm { coeff: self.offset, pauli: "I".repeat(self.n) });
        }
        HamiltonianDoc { n: self.n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant `c` in `H = c I - sum w_P P`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn paulis(&self) -> Vec<PauliString> {
        self.terms.iter().map(|t| t.pauli).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// Index of the term with the same pattern as `p`.
    pub fn find(&self, p: &PauliString) -> Option<usize> {
        self.terms.iter().position(|t| t.pauli.same_pattern(p))
    }

    pub fn plus(&self, other: &PauliHamiltonian) -> Result<PauliHamiltonian> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        let id = PauliString::identity(self.n);
        let pairs = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|t| (-t.weight, t.pauli))
            .chain([(self.offset + other.offset, id)].into_iter().filter(|(c, _)| *c != 0.0));
        PauliHamiltonian::from_coefficients(self.n, pairs)
    }

    pub fn scaled(&self, s: f64) -> Result<PauliHamiltonian> {
        let id = PauliString::identity(self.n);
        let pairs = self
            .terms
            .iter()
            .map(|t| (-t.weight * s, t.pauli))
            .chain([(self.offset * s, id)].into_iter().filter(|(c, _)| *c != 0.0));
        PauliHamiltonian::from_coefficients(self.n, pairs)
    }

    /// True when every term has an even number of `Y` factors.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.pauli.y_count() % 2 == 0)
    }

    pub fn dense(&self) -> Result<DMatrix<Complex64>> {
        self.check_dense()?;
        let dim = 1usize << self.n;
        let mut m = DMatrix::identity(dim, dim) * Complex64::new(self.offset, 0.0);
        for t in &self.terms {
            for b in 0..dim {
                let (r, c) = t.pauli.apply_to_basis(b);
                m[(r, b)] -= c * t.weight;
            }
        }
        Ok(m)
    }

    /// `H v` without forming the matrix.
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = v * Complex64::new(self.offset, 0.0);
        for t in &self.terms {
            for b in 0..v.len() {
                let (r, c) = t.pauli.apply_to_basis(b);
                out[r] -= c * v[b] * t.weight;
            }
        }
        out
    }

    /// `tr(H rho)`.
    pub fn energy(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.n() != self.n {
            return Err(Error::QubitMismatch(self.n, rho.n()));
        }
        let mut e = self.offset;
        for t in &self.terms {
            e -= t.weight * t.pauli.trace_with(rho.matrix()).re;
        }
        Ok(e)
    }

    /// `<psi|H|psi>` for a normalized vector.
    pub fn energy_vector(&self, psi: &DVector<Complex64>) -> f64 {
        psi.dotc(&self.apply(psi)).re
    }

    /// Energy of a pure stabilizer state from its characters.
    pub fn energy_stabilizer(&self, s: &StabilizerState) -> Result<f64> {
        if s.n() != self.n {
            return Err(Error::QubitMismatch(self.n, s.n()));
        }
        Ok(self.energy_stabilizer_unchecked(s))
    }

    pub(crate) fn energy_stabilizer_unchecked(&self, s: &StabilizerState) -> f64 {
        self.offset - self.terms.iter().map(|t| t.weight * s.expectation_unchecked(&t.pauli) as f64).sum::<f64>()
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(linalg::hermitian_eigenvalues(&self.dense()?))
    }

    /// Smallest eigenvalue and its multiplicity within `1e-9`.
    pub fn ground_energy_dense(&self) -> Result<(f64, usize)> {
        let spec = self.spectrum()?;
        let e0 = spec[0];
        let deg = spec.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count();
        Ok((e0, deg))
    }

    pub fn locality_report(&self, max_terms: usize, max_support: usize) -> LocalityReport {
        let k = self.terms.iter().map(|t| t.pauli.support_size()).max().unwrap_or(0);
        LocalityReport {
            term_count: self.terms.len(),
            max_support: k,
            is_sparse: self.terms.len() <= max_terms,
            is_k_local: k <= max_support,
        }
    }

    fn check_dense(&self) -> Result<()> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(self.n, MAX_DENSE_QUBITS));
        }
        Ok(())
    }
}

fn sites(n: usize, s: &[(usize, char)]) -> PauliString {
    PauliString::on_sites(n, s).expect("sites in range")
}

/// Periodic transverse-field Ising chain `-sum Z_j Z_{j+1} - h sum X_j`.
pub fn tfim(n: usize, h: f64) -> Result<PauliHamiltonian> {
    if n < 2 || h < 0.0 {
        return Err(Error::InvalidHamiltonian(format!("tfim needs n >= 2 and h >= 0 (n = {n}, h = {h})")));
    }
    let mut pairs: Vec<(f64, PauliString)> = (0..n).map(|j| (-1.0, sites(n, &[(j, 'Z'), ((j + 1) % n, 'Z')]))).collect();
    if h > 0.0 {
        pairs.extend((0..n).map(|j| (-h, sites(n, &[(j, 'X')]))));
    }
    PauliHamiltonian::from_coefficients(n, pairs)
}

/// Periodic ferromagnetic Heisenberg chain `-sum (XX + YY + ZZ)` on neighbours.
pub fn heisenberg(n: usize) -> Result<PauliHamiltonian> {
    if n < 2 {
        return Err(Error::InvalidHamiltonian("heisenberg needs n >= 2".into()));
    }
    let pairs = (0..n).flat_map(|j| ['X', 'Y', 'Z'].map(|c| (-1.0, sites(n, &[(j, c), ((j + 1) % n, c)]))));
    PauliHamiltonian::from_coefficients(n, pairs)
}

/// `-XX - ZZ + eps (Z1 - Z2)`, whose unperturbed ground state is `|Phi+>`.
pub fn bell_perturbed(eps: f64) -> Result<PauliHamiltonian> {
    let mut pairs = vec![(-1.0, sites(2, &[(0, 'X'), (1, 'X')])), (-1.0, sites(2, &[(0, 'Z'), (1, 'Z')]))];
    if eps != 0.0 {
        pairs.push((eps, sites(2, &[(0, 'Z')])));
        pairs.push((-eps, sites(2, &[(1, 'Z')])));
    }
    PauliHamiltonian::from_coefficients(2, pairs)
}

/// Non-interacting `-sum_i h_i . sigma_i`.
pub fn local_fields(fields: &[[f64; 3]]) -> Result<PauliHamiltonian> {
    let n = fields.len();
    let mut pairs = Vec::new();
    for (i, h) in fields.iter().enumerate() {
        for (k, c) in ['X', 'Y', 'Z'].into_iter().enumerate() {
            if h[k] != 0.0 {
                pairs.push((-h[k], sites(n, &[(i, c)])));
            }
        }
    }
    PauliHamiltonian::from_coefficients(n, pairs)
}

/// Single-qubit `h . sigma`.
pub fn qubit(h: [f64; 3]) -> Result<PauliHamiltonian> {
    local_fields(&[[-h[0], -h[1], -h[2]]])
}

/// `sum_i Z_i`.
pub fn z_sum(n: usize) -> Result<PauliHamiltonian> {
    PauliHamiltonian::from_coefficients(n, (0..n).map(|i| (1.0, sites(n, &[(i, 'Z')]))))
}

/// `-sum_g g` over the supplied generators.
pub fn stabilizer_hamiltonian(g: &StabilizerGroup) -> Result<PauliHamiltonian> {
    PauliHamiltonian::from_weights(g.n(), g.generators().iter().map(|p| (*p, 1.0)))
}

/// Ground energy of the periodic TFIM from the free-fermion momentum sum over
/// the antiperiodic sector, `k = (2m + 1) pi / n`.
pub fn tfim_ground_energy(n: usize, h: f64) -> f64 {
    -(0..n)
        .map(|m| {
            let k = (2 * m + 1) as f64 * PI / n as f64;
            (1.0 + h * h - 2.0 * h * k.cos()).max(0.0).sqrt()
        })
        .sum::<f64>()
}
