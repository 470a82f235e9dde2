//! Gibbs curves, the nonequilibrium free energy and the effective inverse
//! temperatures that fix the optimal heats.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{PauliHamiltonian, DEGENERACY_TOL};
use crate::stabilizer::DensityMatrix;

pub const ROOT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 200;

/// A system Hamiltonian with its cached spectrum and a bath at inverse
/// temperature `beta`.
#[derive(Clone, Debug)]
pub struct ThermalContext {
    h: PauliHamiltonian,
    spectrum: Vec<f64>,
    beta: f64,
    /// Half-width `c` when the spectrum is `{-c, c}`.
    qubit_scale: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GibbsPoint {
    pub x: f64,
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
}

/// One branch of the free-energy root equation. A clamped branch has no
/// finite root and ends at the extremal energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchRoot {
    /// `None` when clamped.
    pub x: Option<f64>,
    pub energy: f64,
    pub clamped: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectiveTemperatures {
    pub cooling: BranchRoot,
    pub heating: BranchRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimalHeat {
    pub q_c: f64,
    pub q_h: f64,
    pub roots: EffectiveTemperatures,
}

impl ThermalContext {
    pub fn new(h: PauliHamiltonian, beta: f64) -> Result<ThermalContext> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Config(format!("beta must be finite and positive, got {beta}")));
        }
        let spectrum = h.spectrum()?;
        let (lo, hi) = (spectrum[0], spectrum[spectrum.len() - 1]);
        let qubit_scale = (spectrum.len() == 2 && (lo + hi).abs() < 1e-14 && hi > 0.0).then_some(hi);
        Ok(ThermalContext { h, spectrum, beta, qubit_scale })
    }

    pub fn hamiltonian(&self) -> &PauliHamiltonian {
        &self.h
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<ThermalContext> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Config(format!("beta must be finite and positive, got {beta}")));
        }
        Ok(ThermalContext { beta, ..self.clone() })
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn e_min(&self) -> f64 {
        self.spectrum[0]
    }

    pub fn e_max(&self) -> f64 {
        self.spectrum[self.spectrum.len() - 1]
    }

    fn degeneracy(&self, e: f64) -> usize {
        self.spectrum.iter().filter(|&&v| (v - e).abs() <= DEGENERACY_TOL).count()
    }

    /// Half the spectral width, the natural scale of `x`.
    pub fn scale(&self) -> f64 {
        ((self.e_max() - self.e_min()) / 2.0).max(f64::MIN_POSITIVE)
    }

    pub fn x_max(&self) -> f64 {
        50.0 / self.scale()
    }

    /// Energy and entropy of the Gibbs state at inverse temperature `x`.
    pub fn gibbs(&self, x: f64) -> GibbsPoint {
        let (energy, entropy) = match self.qubit_scale {
            Some(c) => {
                let y = c * x;
                let t = y.tanh();
                let log2cosh = y.abs() + (-2.0 * y.abs()).exp().ln_1p();
                (-c * t, log2cosh - y * t)
            }
            None => self.spectral(x),
        };
        GibbsPoint { x, energy, entropy, free_energy: energy - entropy / self.beta }
    }

    fn spectral(&self, x: f64) -> (f64, f64) {
        let reference = if x >= 0.0 { self.e_min() } else { self.e_max() };
        let w: Vec<f64> = self.spectrum.iter().map(|e| (-x * (e - reference)).exp()).collect();
        let z: f64 = w.iter().sum();
        let energy = w.iter().zip(&self.spectrum).map(|(w, e)| w * e).sum::<f64>() / z;
        (energy, x * (energy - reference) + z.ln())
    }

    /// `F_beta(rho) = tr(H rho) - S(rho) / beta`.
    pub fn free_energy(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.h.energy(rho)? - rho.entropy() / self.beta)
    }

    pub fn free_energy_of(&self, energy: f64, entropy: f64) -> f64 {
        energy - entropy / self.beta
    }

    /// Free energy of the Gibbs state at the bath temperature.
    pub fn equilibrium_free_energy(&self) -> f64 {
        self.gibbs(self.beta).free_energy
    }

    /// `x -> -inf` limit of `F` (cooling side) and `x -> +inf` limit (heating
    /// side), including the entropy of degenerate extremal levels.
    pub fn limits(&self) -> (f64, f64) {
        let top = self.e_max() - (self.degeneracy(self.e_max()) as f64).ln() / self.beta;
        let bottom = self.e_min() - (self.degeneracy(self.e_min()) as f64).ln() / self.beta;
        (top, bottom)
    }

    /// Roots `x_c <= beta <= x_h` of `F(gamma(x)) = f_target`.
    pub fn solve_effective_temperatures(&self, f_target: f64) -> Result<EffectiveTemperatures> {
        let f_eq = self.equilibrium_free_energy();
        let slack = 1e-12 * (1.0 + f_eq.abs());
        if f_target < f_eq - slack {
            return Err(Error::Infeasible { target: f_target, minimum: f_eq });
        }
        let (top, bottom) = self.limits();
        let cooling = self.branch(f_target, -self.x_max(), top, self.e_max());
        let heating = self.branch(f_target, self.x_max(), bottom, self.e_min());
        Ok(EffectiveTemperatures { cooling, heating })
    }

    fn branch(&self, f_target: f64, far: f64, limit: f64, extreme: f64) -> BranchRoot {
        let clamp = BranchRoot { x: None, energy: extreme, clamped: true };
        if self.spectrum.len() == 1 || f_target >= limit {
            return clamp;
        }
        let g = |x: f64| self.gibbs(x).free_energy - f_target;
        let (mut near, mut g_near) = (self.beta, g(self.beta));
        if g_near >= 0.0 {
            return BranchRoot { x: Some(self.beta), energy: self.gibbs(self.beta).energy, clamped: false };
        }
        let (mut far, mut g_far) = (far, g(far));
        if g_far < 0.0 {
            return clamp;
        }
        let mut x = near;
        for _ in 0..MAX_ITER {
            let secant = near - g_near * (far - near) / (g_far - g_near);
            let mid = 0.5 * (near + far);
            let inside = secant.is_finite() && (secant - near) * (secant - far) < 0.0;
            // secant only while it lands in the inner half of the bracket
            x = if inside && (secant - mid).abs() < 0.25 * (far - near).abs() { secant } else { mid };
            let gx = g(x);
            if gx.abs() < 0.1 * ROOT_TOL || (far - near).abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
            if gx < 0.0 {
                near = x;
                g_near = gx;
            } else {
                far = x;
                g_far = gx;
            }
        }
        BranchRoot { x: Some(x), energy: self.gibbs(x).energy, clamped: false }
    }

    /// `Q_{c/h} = E0 - E(gamma(x_{c/h}))` for a state with energy `e0` and
    /// entropy `s`.
    pub fn optimal_heat_from(&self, e0: f64, s: f64) -> Result<OptimalHeat> {
        let roots = self.solve_effective_temperatures(self.free_energy_of(e0, s))?;
        Ok(OptimalHeat { q_c: e0 - roots.cooling.energy, q_h: e0 - roots.heating.energy, roots })
    }

    pub fn optimal_heat(&self, rho: &DensityMatrix) -> Result<OptimalHeat> {
        self.optimal_heat_from(self.h.energy(rho)?, rho.entropy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{qubit, z_sum};

    fn unit_qubit(beta: f64) -> ThermalContext {
        ThermalContext::new(qubit([0.0, 0.0, 1.0]).unwrap(), beta).unwrap()
    }

    #[test]
    fn qubit_curves() {
        let ctx = unit_qubit(1.0);
        let p = ctx.gibbs(0.0);
        assert!(p.energy.abs() < 1e-15 && (p.entropy - 2f64.ln()).abs() < 1e-15);
        let far = ctx.gibbs(60.0);
        assert!((far.energy + 1.0).abs() < 1e-12 && far.entropy < 1e-12);
        for x in [-3.0, -0.4, 0.0, 0.7, 2.5] {
            let closed = ctx.gibbs(x);
            let (e, s) = ctx.spectral(x);
            assert!((closed.energy - e).abs() < 1e-12 && (closed.entropy - s).abs() < 1e-12);
        }
        // minimum of F over x sits at beta
        let beta = 1.3;
        let ctx = unit_qubit(beta);
        let fb = ctx.gibbs(beta).free_energy;
        assert!((-400..400).map(|k| k as f64 * 0.01).all(|x| ctx.gibbs(x).free_energy >= fb - 1e-14));
    }

    #[test]
    fn equilibrium_roots_coincide() {
        let ctx = ThermalContext::new(z_sum(2).unwrap(), 0.7).unwrap();
        let r = ctx.solve_effective_temperatures(ctx.equilibrium_free_energy()).unwrap();
        assert_eq!(r.cooling.x, Some(0.7));
        assert_eq!(r.heating.x, Some(0.7));
        let g = ctx.gibbs(0.7);
        let q = ctx.optimal_heat_from(g.energy, g.entropy).unwrap();
        assert!(q.q_c.abs() < 1e-12 && q.q_h.abs() < 1e-12);
        assert!(ctx.solve_effective_temperatures(ctx.equilibrium_free_energy() - 1e-6).is_err());
    }

    #[test]
    fn root_residuals_and_bracketing() {
        let ctx = unit_qubit(1.0);
        for (e0, s) in [(0.0, 2f64.ln()), (0.2, 0.3), (-0.5, 0.1), (0.9, 0.0)] {
            let f = ctx.free_energy_of(e0, s);
            let r = ctx.solve_effective_temperatures(f).unwrap();
            for b in [r.cooling, r.heating] {
                if let Some(x) = b.x {
                    assert!((ctx.gibbs(x).free_energy - f).abs() < ROOT_TOL);
                }
            }
            if let (Some(c), Some(h)) = (r.cooling.x, r.heating.x) {
                assert!(c <= 1.0 && 1.0 <= h);
            }
        }
    }

    #[test]
    fn pure_ground_and_excited_states() {
        let ctx = unit_qubit(1.0);
        // ground state: F = -1 equals the heating limit, so that branch clamps at E0
        let r = ctx.solve_effective_temperatures(-1.0).unwrap();
        assert!(r.heating.clamped && r.heating.energy == -1.0);
        let xc = r.cooling.x.unwrap();
        assert!((ctx.gibbs(xc).free_energy + 1.0).abs() < ROOT_TOL);
        // excited state: F = 1 reaches neither limit strictly, both branches clamp
        let q = ctx.optimal_heat_from(1.0, 0.0).unwrap();
        assert!(q.roots.cooling.clamped);
        assert!(q.roots.heating.clamped);
        assert!((q.q_h - 2.0).abs() < 1e-12 && q.q_c.abs() < 1e-12);
        // below the ground-state free energy the heating root is finite
        let q = ctx.optimal_heat_from(-0.9, 0.2).unwrap();
        let xh = q.roots.heating.x.unwrap();
        assert!(xh > 1.0);
        assert!((q.q_h - (-0.9 + xh.tanh())).abs() < 1e-12);
        assert!(q.q_c <= q.q_h);
    }

    #[test]
    fn maximally_mixed_free_energy() {
        let ctx = unit_qubit(2.0);
        let rho = DensityMatrix::maximally_mixed(1);
        assert!((ctx.free_energy(&rho).unwrap() + 2f64.ln() / 2.0).abs() < 1e-15);
    }
}
