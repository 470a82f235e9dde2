//! Two qubits exchanging excitations with a truncated bosonic mode, and the
//! heat `Q(t)` deposited in the mode.
//!
//! Ordering is qubit 1 (x) qubit 2 (x) mode. With `sigma = |0><1|` the
//! conserved quantity is `a^dag a - (Z1 + Z2)/2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::z_sum;
use crate::stabilizer::DensityMatrix;
use crate::thermo::{classify, heat_window_from, smin_stab_slice, HeatVerdict, HeatWindow, ThermalContext};

pub const MIN_CUTOFF: usize = 8;
pub const TRUNCATION_TOL: f64 = 1e-6;
pub const CUTOFF_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TavisCummingsConfig {
    pub epsilon: f64,
    pub g: f64,
    pub beta: f64,
    pub n_max: usize,
    pub t_max: f64,
    pub steps: usize,
    /// Mixing weight of the dephased state in the initial qubit state.
    pub lambda: f64,
}

impl Default for TavisCummingsConfig {
    fn default() -> Self {
        TavisCummingsConfig { epsilon: 1.0, g: 1.0, beta: 1.5, n_max: 20, t_max: 20.0, steps: 401, lambda: 0.0 }
    }
}

impl TavisCummingsConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || !self.g.is_finite() {
            return Err(Error::Config("epsilon and g must be finite".into()));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::Config(format!("beta must be positive, got {}", self.beta)));
        }
        if self.n_max < MIN_CUTOFF {
            return Err(Error::Config(format!("cutoff {} below {MIN_CUTOFF}", self.n_max)));
        }
        if !(self.t_max > 0.0) || self.steps < 2 {
            return Err(Error::Config("time grid needs t_max > 0 and at least two steps".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Config(format!("lambda {} outside [0, 1]", self.lambda)));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.t_max * k as f64 / (self.steps - 1) as f64).collect()
    }

    fn mode_dim(&self) -> usize {
        self.n_max + 1
    }
}

fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

fn embed(q1: &DMatrix<f64>, q2: &DMatrix<f64>, mode: &DMatrix<f64>) -> DMatrix<f64> {
    q1.kronecker(q2).kronecker(mode)
}

/// `eps (Z1 + Z2) + eps a^dag a + g sum_j (a sigma_j^dag + a^dag sigma_j)`.
pub fn build_tc_hamiltonian(cfg: &TavisCummingsConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    let dm = cfg.mode_dim();
    let id2 = DMatrix::<f64>::identity(2, 2);
    let idm = DMatrix::<f64>::identity(dm, dm);
    let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let sigma = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let a = annihilation(dm);
    let num = a.transpose() * &a;
    let mut h = (embed(&z, &id2, &idm) + embed(&id2, &z, &idm)) * cfg.epsilon + embed(&id2, &id2, &num) * cfg.epsilon;
    for s in [embed(&sigma, &id2, &idm), embed(&id2, &sigma, &idm)] {
        let am = embed(&id2, &id2, &a);
        h += (&am * s.transpose() + am.transpose() * &s) * cfg.g;
    }
    Ok(h)
}

/// `a^dag a - (Z1 + Z2)/2` on the same space.
pub fn excitation_operator(cfg: &TavisCummingsConfig) -> DMatrix<f64> {
    let dm = cfg.mode_dim();
    let id2 = DMatrix::<f64>::identity(2, 2);
    let idm = DMatrix::<f64>::identity(dm, dm);
    let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let a = annihilation(dm);
    embed(&id2, &id2, &(a.transpose() * &a)) - (embed(&z, &id2, &idm) + embed(&id2, &z, &idm)) * 0.5
}

/// `(1 + (X + Y + Z)/sqrt 3)/2`.
pub fn t_state() -> DensityMatrix {
    let s = 1.0 / 3f64.sqrt();
    DensityMatrix::from_bloch([s, s, s]).expect("pure Bloch vector")
}

/// `(1 - lambda) rho_T^{(x)2} + lambda D(rho_T^{(x)2})` with `D` the full
/// computational-basis dephasing.
pub fn initial_qubits(lambda: f64) -> Result<DensityMatrix> {
    let t2 = t_state().kron(&t_state())?;
    DensityMatrix::mix(&t2, &t2.dephased(), lambda)
}

/// Truncated Gibbs state of `eps a^dag a`, renormalized on the cutoff space.
pub fn mode_gibbs(cfg: &TavisCummingsConfig) -> DVector<f64> {
    let w = DVector::from_fn(cfg.mode_dim(), |k, _| (-cfg.beta * cfg.epsilon * k as f64).exp());
    let z = w.sum();
    w / z
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatTrace {
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    /// Largest population of the top mode level over the run.
    pub truncation: f64,
    /// Largest change in `Q` when the cutoff is doubled.
    pub cutoff_delta: Option<f64>,
}

fn propagate(cfg: &TavisCummingsConfig) -> Result<(Vec<f64>, f64)> {
    let h = build_tc_hamiltonian(cfg)?;
    let eig = h.symmetric_eigen();
    let u = eig.eigenvectors.map(|v| Complex64::new(v, 0.0));
    let w = eig.eigenvalues;
    let dm = cfg.mode_dim();
    let dim = 4 * dm;

    let rho_s = initial_qubits(cfg.lambda)?;
    let gamma = mode_gibbs(cfg);
    let mode = DMatrix::from_diagonal(&gamma.map(|p| Complex64::new(p, 0.0)));
    let rho = rho_s.matrix().kronecker(&mode);
    let rho_t = u.adjoint() * rho * &u;

    let energies = DVector::from_fn(dim, |k, _| cfg.epsilon * (k % dm) as f64);
    let top = DVector::from_fn(dim, |k, _| if k % dm == dm - 1 { 1.0 } else { 0.0 });
    let rotate = |diag: &DVector<f64>| {
        let d = DMatrix::from_diagonal(&diag.map(|v| Complex64::new(v, 0.0)));
        u.adjoint() * d * &u
    };
    let (h_e, p_top) = (rotate(&energies), rotate(&top));
    let e_start: f64 = gamma.iter().enumerate().map(|(k, p)| p * cfg.epsilon * k as f64).sum();

    // tr(O rho(t)) = sum_kl O_lk rho_kl exp(-i (w_k - w_l) t) in the eigenbasis
    let mut q = Vec::with_capacity(cfg.steps);
    let mut truncation: f64 = 0.0;
    for t in cfg.times() {
        let phase: Vec<Complex64> = w.iter().map(|wk| Complex64::from_polar(1.0, -wk * t)).collect();
        let (mut e, mut p) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for k in 0..dim {
            for l in 0..dim {
                let r = rho_t[(k, l)] * phase[k] * phase[l].conj();
                e += h_e[(l, k)] * r;
                p += p_top[(l, k)] * r;
            }
        }
        q.push(e.re - e_start);
        truncation = truncation.max(p.re);
    }
    Ok((q, truncation))
}

/// The joint state at time `t`, for diagnostics.
pub fn global_state(cfg: &TavisCummingsConfig, t: f64) -> Result<DMatrix<Complex64>> {
    let h = build_tc_hamiltonian(cfg)?;
    let eig = h.symmetric_eigen();
    let u = eig.eigenvectors.map(|v| Complex64::new(v, 0.0));
    let gamma = mode_gibbs(cfg);
    let mode = DMatrix::from_diagonal(&gamma.map(|p| Complex64::new(p, 0.0)));
    let rho = initial_qubits(cfg.lambda)?.matrix().kronecker(&mode);
    let phase = DMatrix::from_diagonal(&eig.eigenvalues.map(|w| Complex64::from_polar(1.0, -w * t)));
    let evolve = &u * phase * u.adjoint();
    Ok(&evolve * rho * evolve.adjoint())
}

/// Exact propagation from `rho_lambda (x) gamma_E`, then a second run at
/// twice the cutoff to bound truncation effects.
pub fn simulate_heat_trace(cfg: &TavisCummingsConfig) -> Result<HeatTrace> {
    cfg.validate()?;
    let (q, truncation) = propagate(cfg)?;
    if truncation >= TRUNCATION_TOL {
        return Err(Error::Truncation(truncation));
    }
    let doubled = TavisCummingsConfig { n_max: 2 * cfg.n_max, ..cfg.clone() };
    let (q2, _) = propagate(&doubled)?;
    let delta = q.iter().zip(&q2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if delta >= CUTOFF_TOL {
        return Err(Error::Truncation(delta));
    }
    Ok(HeatTrace { times: cfg.times(), q, truncation, cutoff_delta: Some(delta) })
}

/// The stabilizer window for `H = Z1 + Z2` at the family energy `2/sqrt 3`.
pub fn tc_window(beta: f64) -> Result<HeatWindow> {
    let h = z_sum(2)?;
    let e0 = h.energy(&initial_qubits(0.0)?)?;
    let s_min = smin_stab_slice(&h, e0)?.s_min;
    heat_window_from(&ThermalContext::new(h, beta)?, e0, s_min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowOverlay {
    pub verdicts: Vec<HeatVerdict>,
    pub certified: bool,
    pub first_certified_time: Option<f64>,
}

pub fn overlay_window(trace: &HeatTrace, window: &HeatWindow) -> WindowOverlay {
    let verdicts: Vec<HeatVerdict> = trace.q.iter().map(|&q| classify(window, q, 0.0)).collect();
    let first = verdicts.iter().position(|v| v.is_certified()).map(|i| trace.times[i]);
    WindowOverlay { certified: first.is_some(), first_certified_time: first, verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n_max: usize, g: f64) -> TavisCummingsConfig {
        TavisCummingsConfig { n_max, g, ..Default::default() }
    }

    #[test]
    fn hamiltonian_structure() {
        let cfg = small(8, 1.0);
        let h = build_tc_hamiltonian(&cfg).unwrap();
        assert!((&h - h.transpose()).amax() < 1e-15);
        let n = excitation_operator(&cfg);
        assert!((&h * &n - &n * &h).amax() < 1e-12);

        let free = build_tc_hamiltonian(&small(8, 0.0)).unwrap();
        assert!(free.iter().enumerate().all(|(i, v)| *v == 0.0 || i % (free.nrows() + 1) == 0));
        assert!(build_tc_hamiltonian(&small(3, 1.0)).is_err());
    }

    #[test]
    fn one_photon_block() {
        // hand-built matrix elements with cutoff 1 on the basis |q1 q2 n>
        let cfg = TavisCummingsConfig { n_max: 1, ..Default::default() };
        let dm = cfg.mode_dim();
        let idx = |a: usize, b: usize, n: usize| (a * 2 + b) * dm + n;
        let h = {
            let id2 = DMatrix::<f64>::identity(2, 2);
            let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
            let sigma = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
            let a = annihilation(dm);
            let idm = DMatrix::<f64>::identity(dm, dm);
            let mut h = embed(&z, &id2, &idm) + embed(&id2, &z, &idm) + embed(&id2, &id2, &(a.transpose() * &a));
            for s in [embed(&sigma, &id2, &idm), embed(&id2, &sigma, &idm)] {
                let am = embed(&id2, &id2, &a);
                h += &am * s.transpose() + am.transpose() * &s;
            }
            h
        };
        assert_eq!(h[(idx(1, 1, 0), idx(1, 1, 0))], -2.0);
        assert_eq!(h[(idx(0, 0, 1), idx(0, 0, 1))], 3.0);
        // a^dag sigma_1 takes |1 1 0> to |0 1 1>
        assert_eq!(h[(idx(0, 1, 1), idx(1, 1, 0))], 1.0);
        assert_eq!(h[(idx(1, 0, 1), idx(1, 1, 0))], 1.0);
        assert_eq!(h[(idx(0, 1, 0), idx(1, 1, 0))], 0.0);
    }

    #[test]
    fn trace_starts_at_zero_and_converges() {
        let cfg = TavisCummingsConfig { t_max: 5.0, steps: 51, ..Default::default() };
        let trace = simulate_heat_trace(&cfg).unwrap();
        assert!(trace.q[0].abs() < 1e-12);
        assert!(trace.cutoff_delta.unwrap() < CUTOFF_TOL);
        assert!(trace.truncation < TRUNCATION_TOL);
    }

    #[test]
    fn window_energy_and_overlay() {
        let w = tc_window(1.5).unwrap();
        assert!((w.e0 - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        let trace = HeatTrace { times: vec![0.0, 1.0], q: vec![0.0, 0.0], truncation: 0.0, cutoff_delta: None };
        if w.contains(0.0) {
            assert!(!overlay_window(&trace, &w).certified);
        }
    }
}
