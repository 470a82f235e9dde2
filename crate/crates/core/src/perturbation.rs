//! Perturbations of stabilizer Hamiltonians: the coupling condition, the
//! split of `V` against a stabilizer group, and the variational state
//! `psi(lambda) ~ |S> - lambda V_perp |S>` that beats every stabilizer state.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::{PauliString, MAX_DENSE_QUBITS};
use crate::stab_energy::stab_energy;
use crate::stabilizer::group::Phased;
use crate::stabilizer::{StabilizerGroup, StabilizerState};

pub const COUPLING_TOL: f64 = 1e-12;
const VARIANCE_TOL: f64 = 1e-12;
const CROSS_CHECK_TOL: f64 = 1e-9;

/// `H_Q = -sum_g w_g g` over the generators of `group`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseHamiltonian {
    pub group: StabilizerGroup,
    pub weights: Vec<f64>,
}

impl BaseHamiltonian {
    pub fn new(group: StabilizerGroup, weights: Vec<f64>) -> Result<BaseHamiltonian> {
        if weights.len() != group.generators().len() || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidHamiltonian("one positive weight per generator".into()));
        }
        Ok(BaseHamiltonian { group, weights })
    }

    pub fn unit(group: StabilizerGroup) -> BaseHamiltonian {
        let weights = vec![1.0; group.generators().len()];
        BaseHamiltonian { group, weights }
    }

    pub fn hamiltonian(&self) -> Result<PauliHamiltonian> {
        PauliHamiltonian::from_weights(self.group.n(), self.group.generators().iter().copied().zip(self.weights.iter().copied()))
    }

    /// Spectral gap of `H_Q` above its ground space.
    pub fn gap(&self) -> f64 {
        2.0 * self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Term indices of `V`. `members` have `+P` in the group, `anti_members`
/// have `-P`, `logical` commute with the group without being in it, and
/// `perp` anticommute with some generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PerturbationSplit {
    pub members: Vec<usize>,
    pub anti_members: Vec<usize>,
    pub logical: Vec<usize>,
    pub perp: Vec<usize>,
}

impl PerturbationSplit {
    /// Terms preserving the codespace.
    pub fn parallel(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.members.iter().chain(&self.anti_members).chain(&self.logical).copied().collect();
        out.sort_unstable();
        out
    }
}

pub fn split_perturbation(q: &StabilizerGroup, v: &PauliHamiltonian) -> Result<PerturbationSplit> {
    if q.n() != v.n() {
        return Err(Error::QubitMismatch(q.n(), v.n()));
    }
    let mut s = PerturbationSplit::default();
    for (i, t) in v.terms().iter().enumerate() {
        match q.character(&t.pauli)? {
            1 => s.members.push(i),
            -1 => s.anti_members.push(i),
            _ if q.commutes_with_all(&t.pauli) => s.logical.push(i),
            _ => s.perp.push(i),
        }
    }
    Ok(s)
}

/// Whether `(1 - |S><S|) V |S>` is nonzero for the unique ground state of a
/// full-rank base. Each anticommuting term maps `|S>` to `i^k R |S>` for a
/// coset representative `R`; distinct representatives give orthogonal states,
/// so the test sums coefficients per representative.
pub fn check_coupling(q: &StabilizerGroup, v: &PauliHamiltonian) -> Result<bool> {
    if q.rank() != q.n() {
        return Err(Error::Premise(format!("degenerate base: rank {} < {}", q.rank(), q.n())));
    }
    let split = split_perturbation(q, v)?;
    let mut cosets: Vec<((u128, u128), Complex64)> = Vec::new();
    for &i in &split.perp {
        let t = &v.terms()[i];
        let r = q.basis().reduce(&t.pauli);
        let c = Complex64::i().powu(r.exp) * (-t.weight);
        match cosets.iter_mut().find(|e| e.0 == (r.x, r.z)) {
            Some(e) => e.1 += c,
            None => cosets.push(((r.x, r.z), c)),
        }
    }
    Ok(cosets.iter().any(|e| e.1.norm() > COUPLING_TOL))
}

/// Dense version of [`check_coupling`].
pub fn check_coupling_dense(q: &StabilizerGroup, v: &PauliHamiltonian) -> Result<bool> {
    let s = StabilizerState::new(q.clone())?.state_vector()?;
    let vs = v.apply(&s);
    let overlap = s.dotc(&vs);
    Ok((vs - s * overlap).norm() > COUPLING_TOL)
}

/// Strict inequality `sum_{P not in Q} w_P < gap - 2 sum_{P in Q} w_P`, with
/// membership read on signed Paulis.
pub fn weak_perturbation_check(base: &BaseHamiltonian, v: &PauliHamiltonian) -> Result<bool> {
    let split = split_perturbation(&base.group, v)?;
    let w = |idx: &[usize]| idx.iter().map(|&i| v.terms()[i].weight).sum::<f64>();
    let inside = w(&split.members);
    let outside = v.total_weight() - inside;
    Ok(outside < base.gap() - 2.0 * inside)
}

fn expect_product(state: &StabilizerState, ops: &[&PauliString]) -> Complex64 {
    let mut acc = Phased::from(ops[0]);
    for p in &ops[1..] {
        acc.mul(p);
    }
    let pattern = PauliString::from_bits_unchecked(state.n(), acc.x, acc.z, false);
    Complex64::i().powu(acc.exp) * state.expectation_unchecked(&pattern) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariationalReport {
    /// `<V_perp^2>` on the code state.
    pub v: f64,
    /// `<V_perp H V_perp> - <V_perp^2><H>`.
    pub a: f64,
    /// `<H>` on the code state.
    pub code_energy: f64,
    pub lambda_max: f64,
    /// `(lambda, Delta E(lambda))` on a uniform grid inside `(0, lambda_max)`.
    pub samples: Vec<(f64, f64)>,
}

/// `Delta E(lambda) = lambda (2v - lambda a) / (1 + lambda^2 v)`.
pub fn delta_e(v: f64, a: f64, lambda: f64) -> f64 {
    lambda * (2.0 * v - lambda * a) / (1.0 + lambda * lambda * v)
}

/// `min(2v/a, (sqrt(a^2 + 4v^3) - a) / (2v^2))`.
pub fn lambda_max(v: f64, a: f64) -> f64 {
    (2.0 * v / a).min(((a * a + 4.0 * v * v * v).sqrt() - a) / (2.0 * v * v))
}

/// `v`, `a` and `<H>` from stabilizer characters, with `H = H_Q + V`.
pub fn perp_moments(h: &PauliHamiltonian, v: &PauliHamiltonian, split: &PerturbationSplit, code: &StabilizerState) -> (f64, f64, f64) {
    let perp: Vec<(f64, &PauliString)> = split.perp.iter().map(|&i| (-v.terms()[i].weight, &v.terms()[i].pauli)).collect();
    let terms: Vec<(f64, &PauliString)> = h.terms().iter().map(|t| (-t.weight, &t.pauli)).collect();
    let mut vv = Complex64::new(0.0, 0.0);
    let mut vhv = Complex64::new(0.0, 0.0);
    for &(ci, pi) in &perp {
        for &(cj, pj) in &perp {
            vv += expect_product(code, &[pi, pj]) * (ci * cj);
            for &(dk, tk) in &terms {
                vhv += expect_product(code, &[pi, tk, pj]) * (ci * cj * dk);
            }
        }
    }
    let vv = vv.re;
    let energy = h.energy_stabilizer_unchecked(code);
    let vhv = vhv.re + h.offset() * vv;
    (vv, vhv - vv * energy, energy)
}

/// The same moments from dense matrices.
pub fn perp_moments_dense(h: &PauliHamiltonian, v: &PauliHamiltonian, split: &PerturbationSplit, code: &StabilizerState) -> Result<(f64, f64, f64)> {
    let psi = code.state_vector()?;
    let vp = perp_operator(v, split)?;
    let phi = vp.apply(&psi);
    let vv = phi.norm_squared();
    let energy = h.energy_vector(&psi);
    let vhv = phi.dotc(&h.apply(&phi)).re;
    Ok((vv, vhv - vv * energy, energy))
}

fn perp_operator(v: &PauliHamiltonian, split: &PerturbationSplit) -> Result<PauliHamiltonian> {
    let pairs: Vec<(PauliString, f64)> = split.perp.iter().map(|&i| (v.terms()[i].pauli, v.terms()[i].weight)).collect();
    if pairs.is_empty() {
        return PauliHamiltonian::from_coefficients(v.n(), []);
    }
    PauliHamiltonian::from_weights(v.n(), pairs)
}

/// `lambda -> psi(lambda)` as dense vectors.
pub struct VariationalFamily {
    psi: DVector<Complex64>,
    v_perp_psi: DVector<Complex64>,
}

impl VariationalFamily {
    pub fn state(&self, lambda: f64) -> DVector<Complex64> {
        let raw = &self.psi - &self.v_perp_psi * Complex64::new(lambda, 0.0);
        let norm = raw.norm();
        raw / Complex64::new(norm, 0.0)
    }
}

/// Builds the variational family around `code` and reports `v`, `a`,
/// `lambda_max` and `Delta E` on `grid` interior points.
pub fn variational_state(
    base: &BaseHamiltonian,
    v: &PauliHamiltonian,
    code: &StabilizerState,
    grid: usize,
) -> Result<(VariationalFamily, VariationalReport)> {
    if v.n() > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits(v.n(), MAX_DENSE_QUBITS));
    }
    let h = base.hamiltonian()?.plus(v)?;
    let split = split_perturbation(&base.group, v)?;
    let (vv, a, code_energy) = perp_moments(&h, v, &split, code);
    if vv <= VARIANCE_TOL {
        return Err(Error::Premise("<V_perp^2> vanishes on the code state".into()));
    }
    if !weak_perturbation_check(base, v)? {
        return Err(Error::Premise("perturbation is not weak".into()));
    }
    let lmax = lambda_max(vv, a);
    let samples = (1..=grid)
        .map(|k| {
            let l = lmax * k as f64 / (grid + 1) as f64;
            (l, delta_e(vv, a, l))
        })
        .collect();
    let psi = code.state_vector()?;
    let v_perp_psi = perp_operator(v, &split)?.apply(&psi);
    Ok((
        VariationalFamily { psi, v_perp_psi },
        VariationalReport { v: vv, a, code_energy, lambda_max: lmax, samples },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiseFailure {
    /// Terms of `V` outside the group that commute with all of it.
    CommutingOutsideGroup(Vec<usize>),
    NotWeak,
    ZeroPerpVariance,
    NonPositiveCurvature,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GapCertificate {
    GapCertified {
        lambda: f64,
        /// `<H>` on `psi(lambda)`.
        energy: f64,
        e_stab: f64,
        code_state: StabilizerState,
        report: VariationalReport,
    },
    PremisesFailed {
        failures: Vec<PremiseFailure>,
    },
}

/// Evaluates every premise, then takes `lambda = lambda_max / 2` and checks
/// the resulting energy against `E_STAB(H_Q + V)` computed independently and
/// against a dense evaluation of `psi(lambda)`.
pub fn certify_gap_by_perturbation(base: &BaseHamiltonian, v: &PauliHamiltonian) -> Result<GapCertificate> {
    let split = split_perturbation(&base.group, v)?;
    let h = base.hamiltonian()?.plus(v)?;
    let mut failures = Vec::new();
    let mut commuting: Vec<usize> = split.anti_members.iter().chain(&split.logical).copied().collect();
    if !commuting.is_empty() {
        commuting.sort_unstable();
        failures.push(PremiseFailure::CommutingOutsideGroup(commuting));
    }
    if !weak_perturbation_check(base, v)? {
        failures.push(PremiseFailure::NotWeak);
    }
    let code = base
        .group
        .code_basis_states()
        .into_iter()
        .map(|s| {
            let m = perp_moments(&h, v, &split, &s);
            (s, m)
        })
        .find(|(_, m)| m.0 > VARIANCE_TOL);
    let Some((code, (vv, a, code_energy))) = code else {
        failures.push(PremiseFailure::ZeroPerpVariance);
        return Ok(GapCertificate::PremisesFailed { failures });
    };
    if !(a > 0.0) {
        failures.push(PremiseFailure::NonPositiveCurvature);
    }
    if !failures.is_empty() {
        return Ok(GapCertificate::PremisesFailed { failures });
    }
    let (family, report) = variational_state(base, v, &code, 16)?;
    debug_assert!((report.v - vv).abs() < 1e-12 && (report.code_energy - code_energy).abs() < 1e-12);
    let lambda = report.lambda_max / 2.0;
    let energy = code_energy - delta_e(vv, a, lambda);
    let dense = h.energy_vector(&family.state(lambda));
    if (dense - energy).abs() > CROSS_CHECK_TOL * (1.0 + energy.abs()) {
        return Err(Error::Premise(format!("variational energy {energy} disagrees with dense {dense}")));
    }
    let e_stab = stab_energy(&h)?.value;
    if !(energy < e_stab) {
        return Err(Error::Premise(format!("variational energy {energy} not below E_STAB {e_stab}")));
    }
    Ok(GapCertificate::GapCertified { lambda, energy, e_stab, code_state: code, report })
}
