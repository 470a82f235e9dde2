//! Stabilizer ground-state energy, the stabilizer gap and the energy witness.

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frustration::{
    is_sum_of_stabilizers, max_cmax_subset, mwis_bipartite, mwis_bipartite_with, mwis_exact, CommutingSubset, FrustrationGraph,
    IndependentSet, CMAX_BUDGET,
};
use crate::hamiltonian::{bell_perturbed, tfim, tfim_ground_energy, PauliHamiltonian};
use crate::pauli::{PauliString, MAX_DENSE_QUBITS};
use crate::stabilizer::{pure_states, StabilizerGroup, StabilizerState, MAX_ENUMERATION_QUBITS};

pub const CERTIFICATE_TOL: f64 = 1e-10;
pub const GAP_ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    Cmax,
    Mwis,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabEnergyResult {
    pub value: f64,
    pub method: Method,
    /// A pure stabilizer state attaining `value`.
    pub state: StabilizerState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<CommutingSubset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent_set: Option<IndependentSet>,
}

impl StabEnergyResult {
    /// Re-evaluates the certificate state's energy.
    pub fn verify(&self, h: &PauliHamiltonian) -> Result<bool> {
        Ok((h.energy_stabilizer(&self.state)? - self.value).abs() <= CERTIFICATE_TOL * (1.0 + self.value.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub e_stab: f64,
    pub e_gs: f64,
    pub delta: f64,
}

impl GapReport {
    pub fn new(e_stab: f64, e_gs: f64) -> GapReport {
        GapReport { e_stab, e_gs, delta: e_stab - e_gs }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.abs() <= GAP_ZERO_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedNonstabilizer,
    Inconclusive,
}

/// Minimum over all pure stabilizer states, from their characters.
pub fn stab_energy_enumeration(h: &PauliHamiltonian) -> Result<StabEnergyResult> {
    let n = h.n();
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_ENUMERATION_QUBITS));
    }
    let (state, value) = pure_states(n)
        .iter()
        .map(|s| (s, h.energy_stabilizer_unchecked(s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty enumeration");
    Ok(StabEnergyResult { value, method: Method::Enumeration, state: state.clone(), subset: None, independent_set: None })
}

/// Maximization over consistently signed maximal commuting subsets.
pub fn stab_energy_cmax(h: &PauliHamiltonian) -> Result<StabEnergyResult> {
    let subset = max_cmax_subset(h)?;
    Ok(StabEnergyResult {
        value: subset.energy(h),
        method: Method::Cmax,
        state: subset.witness_state(h),
        subset: Some(subset),
        independent_set: None,
    })
}

/// `offset - MWIS` for sum-of-stabilizers Hamiltonians. Refuses when the
/// decomposition premise fails.
pub fn stab_energy_mwis(h: &PauliHamiltonian, groups: &[StabilizerGroup]) -> Result<StabEnergyResult> {
    if !is_sum_of_stabilizers(h, groups)? {
        return Err(Error::Premise("hamiltonian is not a sum of independent stabilizer groups".into()));
    }
    let g = FrustrationGraph::new(h);
    let set = match mwis_bipartite(&g)? {
        Some(s) => s,
        None => mwis_exact(&g)?,
    };
    let mut basis = crate::stabilizer::group::SignedBasis::new(h.n());
    for &v in &set.vertices {
        if let crate::stabilizer::group::Insert::MinusIdentity = basis.insert(&g.vertices[v]) {
            return Err(Error::Premise("independent set generates -1".into()));
        }
    }
    let subset = CommutingSubset { members: set.vertices.clone(), anti_members: Vec::new(), generators: basis.rows, total_weight: set.weight };
    Ok(StabEnergyResult {
        value: h.offset() - set.weight,
        method: Method::Mwis,
        state: subset.witness_state(h),
        subset: None,
        independent_set: Some(set),
    })
}

/// Enumeration for `n <= 3`, signed commuting subsets otherwise.
pub fn stab_energy(h: &PauliHamiltonian) -> Result<StabEnergyResult> {
    if h.n() <= MAX_ENUMERATION_QUBITS {
        stab_energy_enumeration(h)
    } else {
        stab_energy_cmax(h)
    }
}

/// The all-`Z` and all-`X` stabilizer groups of the periodic Ising chain.
pub fn tfim_groups(n: usize) -> Result<(StabilizerGroup, StabilizerGroup)> {
    let zz = (0..n - 1).map(|j| PauliString::on_sites(n, &[(j, 'Z'), (j + 1, 'Z')])).collect::<Result<Vec<_>>>()?;
    let x = (0..n).map(|j| PauliString::single(n, j, 'X')).collect::<Result<Vec<_>>>()?;
    Ok((StabilizerGroup::new(zz)?, StabilizerGroup::new(x)?))
}

/// `E_STAB` of the periodic Ising chain in exact rational arithmetic, via the
/// bipartite min-cut on the frustration graph.
pub fn tfim_stab_energy_exact(n: usize, h: Ratio<i64>) -> Result<Ratio<i64>> {
    if h < Ratio::from_integer(0) {
        return Err(Error::InvalidHamiltonian("tfim field must be nonnegative".into()));
    }
    let ham = tfim(n, *h.numer() as f64 / *h.denom() as f64)?;
    let (sz, sx) = tfim_groups(n)?;
    let groups = if h == Ratio::from_integer(0) { vec![sz] } else { vec![sz, sx] };
    if !is_sum_of_stabilizers(&ham, &groups)? {
        return Err(Error::Premise("tfim decomposition".into()));
    }
    let g = FrustrationGraph::new(&ham);
    // bond weights are integers; two sites merge their pair of bonds into one term
    let weights: Vec<Ratio<i64>> = g
        .vertices
        .iter()
        .zip(&g.weights)
        .map(|(p, w)| if p.x_bits() != 0 { h } else { Ratio::from_integer(w.round() as i64) })
        .collect();
    let (_, w) = mwis_bipartite_with(&g, &weights).ok_or_else(|| Error::Premise("tfim graph not bipartite".into()))?;
    Ok(-w)
}

/// `-n max(1, h)` with the matching product-state certificate.
pub fn tfim_stab_energy_closed_form(n: usize, h: f64) -> Result<StabEnergyResult> {
    let (sz, sx) = tfim_groups(n)?;
    let (group, fix) = if h <= 1.0 { (sz, PauliString::single(n, 0, 'Z')?) } else { (sx, PauliString::identity(n)) };
    let mut gens = group.generators().to_vec();
    if !fix.is_identity() {
        gens.push(fix);
    }
    let state = StabilizerState::from_generators(gens)?;
    Ok(StabEnergyResult {
        value: -(n as f64) * h.max(1.0),
        method: Method::ClosedForm,
        state,
        subset: None,
        independent_set: None,
    })
}

/// Gap with `E_STAB` from [`stab_energy`] and `E_gs` from dense
/// diagonalization.
pub fn stabilizer_gap(h: &PauliHamiltonian) -> Result<GapReport> {
    if h.n() > MAX_DENSE_QUBITS {
        return Err(Error::NoGroundMethod(h.n()));
    }
    if h.n() > MAX_ENUMERATION_QUBITS && h.len() > CMAX_BUDGET {
        return Err(Error::Budget { what: "cmax terms", size: h.len(), budget: CMAX_BUDGET });
    }
    let e_stab = stab_energy(h)?.value;
    let (e_gs, _) = h.ground_energy_dense()?;
    Ok(GapReport::new(e_stab, e_gs))
}

/// Gap of the periodic Ising chain from both closed forms; any `n`.
pub fn tfim_gap(n: usize, h: f64) -> GapReport {
    GapReport::new(-(n as f64) * h.max(1.0), tfim_ground_energy(n, h))
}

/// Certified iff `e_measured < e_stab - tolerance`.
pub fn witness_against(e_stab: f64, e_measured: f64, tolerance: f64) -> Verdict {
    if e_measured < e_stab - tolerance {
        Verdict::CertifiedNonstabilizer
    } else {
        Verdict::Inconclusive
    }
}

pub fn witness_energy(h: &PauliHamiltonian, e_measured: f64, tolerance: f64) -> Result<Verdict> {
    Ok(witness_against(stab_energy(h)?.value, e_measured, tolerance))
}

/// `1 (x) exp(-i phi X / 2) (cos theta |00> + sin theta |11>)`.
pub fn bell_family_state(theta: f64, phi: f64) -> DVector<Complex64> {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let a = theta.cos();
    let b = theta.sin();
    // second qubit rotated: |0> -> c|0> - i s|1>, |1> -> -i s|0> + c|1>
    DVector::from_vec(vec![
        Complex64::new(a * c, 0.0),
        Complex64::new(0.0, -a * s),
        Complex64::new(0.0, -b * s),
        Complex64::new(b * c, 0.0),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub theta: f64,
    pub phi: f64,
    pub energy: f64,
    pub verdict: Verdict,
}

/// Energies of the two-parameter family under the perturbed Bell Hamiltonian
/// on a `theta in [0, pi/2]`, `phi in [0, 2 pi)` grid.
pub fn bell_witness_grid(eps: f64, n_theta: usize, n_phi: usize) -> Result<Vec<WitnessPoint>> {
    let h = bell_perturbed(eps)?;
    let e_stab = stab_energy(&h)?.value;
    let points: Vec<(f64, f64)> = (0..n_theta)
        .flat_map(|i| {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / (n_theta.max(2) - 1) as f64;
            (0..n_phi).map(move |j| (theta, 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64))
        })
        .collect();
    Ok(points
        .into_par_iter()
        .map(|(theta, phi)| {
            let energy = h.energy_vector(&bell_family_state(theta, phi));
            WitnessPoint { theta, phi, energy, verdict: witness_against(e_stab, energy, 0.0) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{heisenberg, qubit, stabilizer_hamiltonian};

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let s = 1.0 / 3f64.sqrt();
        let h = qubit([-s, -s, -s]).unwrap();
        let r = stab_energy_enumeration(&h).unwrap();
        assert!((r.value + s).abs() < 1e-12);
        assert!(r.verify(&h).unwrap());
        for eps in [0.0, 0.7, 1.5, 2.0] {
            let h = bell_perturbed(eps).unwrap();
            let e = stab_energy_enumeration(&h).unwrap().value;
            assert!((e - (-2f64).min(1.0 - 2.0 * eps)).abs() < 1e-12, "{eps}");
        }
        let z = PauliHamiltonian::from_weights(1, [(p("Z"), 1.0)]).unwrap();
        assert_eq!(stab_energy_enumeration(&z).unwrap().value, -1.0);
    }

    #[test]
    fn cmax_examples() {
        for (n, h) in [(3, 0.5), (4, 1.7), (5, 1.0)] {
            let r = stab_energy_cmax(&tfim(n, h).unwrap()).unwrap();
            assert!((r.value + n as f64 * h.max(1.0)).abs() < 1e-12);
            assert!(r.verify(&tfim(n, h).unwrap()).unwrap());
        }
        let heis = heisenberg(4).unwrap();
        let r = stab_energy_cmax(&heis).unwrap();
        assert!((r.value + 4.0).abs() < 1e-12);
        assert!(r.verify(&heis).unwrap());
        let g = StabilizerGroup::new(vec![p("XXI"), p("ZZI"), p("-IIY")]).unwrap();
        let hs = stabilizer_hamiltonian(&g).unwrap();
        assert!((stab_energy_cmax(&hs).unwrap().value + 3.0).abs() < 1e-12);
    }

    #[test]
    fn mwis_examples() {
        // 3-cycle bipartite family: Z side weight 3 beats X side 1.5
        let (sz, sx) = tfim_groups(3).unwrap();
        let h = tfim(3, 0.5).unwrap();
        let r = stab_energy_mwis(&h, &[sz, sx]).unwrap();
        assert!((r.value + 3.0).abs() < 1e-12);
        assert!(r.verify(&h).unwrap());

        let (sz, sx) = tfim_groups(6).unwrap();
        let h = tfim(6, 1.3).unwrap();
        let r = stab_energy_mwis(&h, &[sz, sx]).unwrap();
        assert!((r.value + 7.8).abs() < 1e-12);
        assert!(r.verify(&h).unwrap());

        let g = StabilizerGroup::new(vec![p("XX"), p("ZZ")]).unwrap();
        let hs = PauliHamiltonian::from_weights(2, [(p("XX"), 0.3), (p("ZZ"), 0.3)]).unwrap();
        assert!((stab_energy_mwis(&hs, &[g]).unwrap().value + 0.6).abs() < 1e-12);

        let heis = heisenberg(3).unwrap();
        let singles: Vec<StabilizerGroup> = heis.paulis().into_iter().map(|q| StabilizerGroup::new(vec![q]).unwrap()).collect();
        assert!(matches!(stab_energy_mwis(&heis, &singles), Err(Error::Premise(_))));
    }

    #[test]
    fn tfim_exact_and_closed_form() {
        assert_eq!(tfim_stab_energy_exact(7, Ratio::new(13, 10)).unwrap(), Ratio::new(-91, 10));
        assert_eq!(tfim_stab_energy_exact(4, Ratio::new(0, 1)).unwrap(), Ratio::from_integer(-4));
        for h in [0.3, 1.0, 1.9] {
            let r = tfim_stab_energy_closed_form(6, h).unwrap();
            assert!(r.verify(&tfim(6, h).unwrap()).unwrap());
        }
    }

    #[test]
    fn gaps() {
        let s = 1.0 / 3f64.sqrt();
        let g = stabilizer_gap(&qubit([s, s, s]).unwrap()).unwrap();
        assert!((g.delta - (1.0 - s)).abs() < 1e-10);
        assert!(stabilizer_gap(&heisenberg(4).unwrap()).unwrap().is_zero());
        let g = stabilizer_gap(&bell_perturbed(1.5).unwrap()).unwrap();
        assert!((g.delta - (10f64.sqrt() - 3.0)).abs() < 1e-10);
        assert!(stabilizer_gap(&bell_perturbed(1.2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn witness() {
        let s = 1.0 / 3f64.sqrt();
        let h = qubit([-s, -s, -s]).unwrap();
        assert_eq!(witness_energy(&h, -0.9, 0.0).unwrap(), Verdict::CertifiedNonstabilizer);
        assert_eq!(witness_energy(&h, -s, 0.0).unwrap(), Verdict::Inconclusive);
        let hb = bell_perturbed(1.5).unwrap();
        let e = hb.energy_vector(&bell_family_state(std::f64::consts::FRAC_PI_4, 0.0));
        assert!((e + 2.0).abs() < 1e-12);
        assert_eq!(witness_energy(&hb, -2.0, 0.0).unwrap(), Verdict::Inconclusive);
        let grid = bell_witness_grid(1.5, 21, 20).unwrap();
        assert!(grid.iter().any(|p| p.verdict == Verdict::CertifiedNonstabilizer));
    }
}
