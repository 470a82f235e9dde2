//! One-parameter families `lambda -> rho_lambda` at fixed energy and their
//! detectability (`lambda_crt`) and magic (`lambda_star`) thresholds.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::gibbs::ThermalContext;
use super::slice::{classify, heat_window_from, smin_stab_slice, HeatVerdict, HeatWindow};
use crate::error::{Error, Result};
use crate::hamiltonian::{qubit, z_sum, PauliHamiltonian};
use crate::stabilizer::{polytope_membership, DensityMatrix};

const GRID: usize = 41;
const ENERGY_DRIFT_TOL: f64 = 1e-10;
const BISECTION_STEPS: usize = 60;

type StateFn = dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync;

pub struct Family {
    pub name: String,
    pub hamiltonian: PauliHamiltonian,
    state: Box<StateFn>,
}

impl Family {
    pub fn new(name: &str, hamiltonian: PauliHamiltonian, state: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static) -> Family {
        Family { name: name.to_string(), hamiltonian, state: Box::new(state) }
    }

    pub fn state(&self, lambda: f64) -> Result<DensityMatrix> {
        (self.state)(lambda)
    }

    pub fn energy(&self, lambda: f64) -> Result<f64> {
        self.hamiltonian.energy(&self.state(lambda)?)
    }

    pub fn entropy(&self, lambda: f64) -> Result<f64> {
        Ok(self.state(lambda)?.entropy())
    }

    /// Energy constant and entropy nondecreasing on a uniform grid.
    pub fn check_premises(&self) -> Result<f64> {
        let e0 = self.energy(0.0)?;
        let mut last = f64::NEG_INFINITY;
        for k in 0..GRID {
            let l = k as f64 / (GRID - 1) as f64;
            let rho = self.state(l)?;
            let e = self.hamiltonian.energy(&rho)?;
            if (e - e0).abs() > ENERGY_DRIFT_TOL {
                return Err(Error::Family(format!("{}: energy drifts from {e0} to {e} at lambda = {l}", self.name)));
            }
            let s = rho.entropy();
            if s < last - 1e-12 {
                return Err(Error::Family(format!("{}: entropy decreases at lambda = {l}", self.name)));
            }
            last = s;
        }
        Ok(e0)
    }
}

/// `rho = (1 + r . sigma)/2` with `r = (1 - lambda)(1, 0, 1)/sqrt 2` under
/// `H = h . sigma`, `h = (1, -1, -1)/sqrt 3`, at energy 0.
pub fn depolarized_h() -> Family {
    let s = 1.0 / 3f64.sqrt();
    let c = 0.5f64.sqrt();
    Family::new("depolarized-h", qubit([s, -s, -s]).expect("valid field"), move |l| {
        DensityMatrix::from_bloch([(1.0 - l) * c, 0.0, (1.0 - l) * c])
    })
}

/// The T state dephased in the `Z` eigenbasis under `H = Z`, at energy
/// `1/sqrt 3`.
pub fn dephased_t() -> Family {
    let s = 1.0 / 3f64.sqrt();
    Family::new("dephased-t", qubit([0.0, 0.0, 1.0]).expect("valid field"), move |l| {
        DensityMatrix::from_bloch([(1.0 - l) * s, (1.0 - l) * s, s])
    })
}

/// `(sqrt3 |000> + e^{i pi/4} |111>)/2` mixed with its computational-basis
/// dephasing, under `H = Z1 + Z2 + Z3` at energy 3/2.
pub fn ghz3() -> Family {
    let mut psi = DVector::from_element(8, Complex64::new(0.0, 0.0));
    psi[0] = Complex64::new(3f64.sqrt() / 2.0, 0.0);
    psi[7] = Complex64::from_polar(0.5, FRAC_PI_4);
    let pure = DensityMatrix::from_pure(&psi).expect("normalized");
    let dephased = pure.dephased();
    Family::new("ghz3", z_sum(3).expect("three qubits"), move |l| DensityMatrix::mix(&pure, &dephased, l))
}

pub fn preset(name: &str) -> Option<Family> {
    match name {
        "depolarized-h" => Some(depolarized_h()),
        "dephased-t" => Some(dephased_t()),
        "ghz3" => Some(ghz3()),
        _ => None,
    }
}

pub const PRESETS: [&str; 3] = ["depolarized-h", "dephased-t", "ghz3"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyThresholds {
    pub e0: f64,
    pub s_min: f64,
    /// Smallest lambda at which the heat witness stops certifying.
    pub lambda_crt: f64,
    /// Where `S(rho_lambda)` reaches `S_min`, for comparison.
    pub lambda_crt_entropy: f64,
    /// Smallest lambda at which the state enters the stabilizer polytope.
    pub lambda_star: f64,
}

fn bisect(mut lo: f64, mut hi: f64, steps: usize, tol: f64, mut past: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..steps {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if past(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Heat-witness verdict on `rho_lambda` using its own optimal heats.
pub fn heat_verdict(family: &Family, ctx: &ThermalContext, window: &HeatWindow, lambda: f64) -> Result<(HeatVerdict, f64, f64)> {
    let rho = family.state(lambda)?;
    let q = ctx.optimal_heat(&rho)?;
    let verdict = match classify(window, q.q_c, 0.0) {
        HeatVerdict::Inconclusive => classify(window, q.q_h, 0.0),
        v => v,
    };
    Ok((verdict, q.q_c, q.q_h))
}

/// `(E0, S_min, lambda_crt, lambda_crt_entropy)` without the polytope
/// threshold, which dominates the cost for three qubits.
pub fn crt_thresholds(family: &Family, beta: f64) -> Result<(f64, f64, f64, f64)> {
    let e0 = family.check_premises()?;
    let ctx = ThermalContext::new(family.hamiltonian.clone(), beta)?;
    let s_min = smin_stab_slice(&family.hamiltonian, e0)?.s_min;
    let window = heat_window_from(&ctx, e0, s_min)?;
    let lambda_crt = bisect(0.0, 1.0, BISECTION_STEPS, 1e-12, |l| Ok(!heat_verdict(family, &ctx, &window, l)?.0.is_certified()))?;
    let lambda_crt_entropy = bisect(0.0, 1.0, BISECTION_STEPS, 1e-12, |l| Ok(family.entropy(l)? >= s_min))?;
    Ok((e0, s_min, lambda_crt, lambda_crt_entropy))
}

/// `lambda_crt` by bisection on the heat verdict (cross-checked by the
/// entropy crossing) and `lambda_star` by bisection on polytope membership.
pub fn family_thresholds(family: &Family, beta: f64, star_tol: f64) -> Result<FamilyThresholds> {
    let (e0, s_min, lambda_crt, lambda_crt_entropy) = crt_thresholds(family, beta)?;
    let lambda_star = bisect(0.0, 1.0, BISECTION_STEPS, star_tol, |l| Ok(!polytope_membership(&family.state(l)?)?.is_outside()))?;
    Ok(FamilyThresholds { e0, s_min, lambda_crt, lambda_crt_entropy, lambda_star })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub e0: f64,
    pub s: f64,
    pub q_c: f64,
    pub q_h: f64,
    pub q_c_stab: f64,
    pub q_h_stab: f64,
    pub verdict: String,
}

/// Heats and window on `points` evenly spaced lambdas in `[0, 1]`.
pub fn family_sweep(family: &Family, beta: f64, points: usize) -> Result<Vec<SweepRow>> {
    let e0 = family.check_premises()?;
    let ctx = ThermalContext::new(family.hamiltonian.clone(), beta)?;
    let window = heat_window_from(&ctx, e0, smin_stab_slice(&family.hamiltonian, e0)?.s_min)?;
    (0..points)
        .map(|k| {
            let lambda = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
            let (verdict, q_c, q_h) = heat_verdict(family, &ctx, &window, lambda)?;
            Ok(SweepRow {
                lambda,
                e0,
                s: family.entropy(lambda)?,
                q_c,
                q_h,
                q_c_stab: window.q_c_stab,
                q_h_stab: window.q_h_stab,
                verdict: if verdict.is_certified() { "certified".into() } else { "inconclusive".into() },
            })
        })
        .collect()
}
