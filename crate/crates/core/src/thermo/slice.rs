//! Minimum entropy on a fixed-energy slice of the stabilizer polytope and the
//! stabilizer heat window built from it.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::gibbs::ThermalContext;
use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::linalg::shannon;
use crate::stabilizer::{pure_states, MAX_ENUMERATION_QUBITS};

pub const SLICE_TOL: f64 = 1e-12;

/// The minimizer: vertex `a` alone when `a == b`, otherwise the mixture
/// `p |a><a| + (1 - p) |b><b|` of two enumerated stabilizer states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SliceMinimum {
    pub s_min: f64,
    pub a: usize,
    pub b: usize,
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatWindow {
    pub e0: f64,
    pub s_min: f64,
    pub f_star: f64,
    pub q_c_stab: f64,
    pub q_h_stab: f64,
    pub cooling_clamped: bool,
    pub heating_clamped: bool,
}

impl HeatWindow {
    pub fn contains(&self, q: f64) -> bool {
        self.q_c_stab <= q && q <= self.q_h_stab
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationReason {
    /// No stabilizer state has the measured energy.
    EmptySlice,
    BelowWindow,
    AboveWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HeatVerdict {
    Certified { reason: CertificationReason },
    Inconclusive,
}

impl HeatVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, HeatVerdict::Certified { .. })
    }
}

/// `|<a|b>|^2` for every pair of enumerated pure stabilizer states.
fn overlaps(n: usize) -> &'static Vec<Vec<f64>> {
    static CACHE: [OnceLock<Vec<Vec<f64>>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[n - 1].get_or_init(|| {
        let vecs: Vec<_> = pure_states(n).iter().map(|s| s.state_vector().expect("small n")).collect();
        vecs.par_iter().map(|a| vecs.iter().map(|b| a.dotc(b).norm_sqr()).collect()).collect()
    })
}

/// Entropy of `p |a><a| + (1 - p) |b><b|` given `|<a|b>|^2`.
pub fn two_state_entropy(p: f64, overlap: f64) -> f64 {
    let disc = (1.0 - 4.0 * p * (1.0 - p) * (1.0 - overlap)).max(0.0).sqrt();
    shannon([(1.0 + disc) / 2.0, (1.0 - disc) / 2.0])
}

/// Minimum von Neumann entropy over stabilizer mixtures with energy `e0`.
/// Entropy is concave, so the minimum sits at an extreme point of the slice,
/// and those lie on segments between pairs of vertices.
pub fn smin_stab_slice(h: &PauliHamiltonian, e0: f64) -> Result<SliceMinimum> {
    let n = h.n();
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_ENUMERATION_QUBITS));
    }
    let states = pure_states(n);
    let energies: Vec<f64> = states.iter().map(|s| h.energy_stabilizer_unchecked(s)).collect();
    let tol = SLICE_TOL * (1.0 + e0.abs());
    if let Some(a) = energies.iter().position(|e| (e - e0).abs() <= tol) {
        return Ok(SliceMinimum { s_min: 0.0, a, b: a, p: 1.0 });
    }
    let below: Vec<usize> = (0..states.len()).filter(|&i| energies[i] < e0).collect();
    let above: Vec<usize> = (0..states.len()).filter(|&i| energies[i] > e0).collect();
    if below.is_empty() || above.is_empty() {
        return Err(Error::EmptySlice(e0));
    }
    let ov = overlaps(n);
    below
        .par_iter()
        .map(|&a| {
            above
                .iter()
                .map(|&b| {
                    let p = (energies[b] - e0) / (energies[b] - energies[a]);
                    SliceMinimum { s_min: two_state_entropy(p, ov[a][b]), a, b, p }
                })
                .min_by(|x, y| x.s_min.total_cmp(&y.s_min))
                .expect("nonempty")
        })
        .min_by(|x, y| x.s_min.total_cmp(&y.s_min).then((x.a, x.b).cmp(&(y.a, y.b))))
        .ok_or(Error::EmptySlice(e0))
}

/// Window from a known slice entropy minimum.
pub fn heat_window_from(ctx: &ThermalContext, e0: f64, s_min: f64) -> Result<HeatWindow> {
    let f_star = e0 - s_min / ctx.beta();
    let roots = ctx.solve_effective_temperatures(f_star)?;
    Ok(HeatWindow {
        e0,
        s_min,
        f_star,
        q_c_stab: e0 - roots.cooling.energy,
        q_h_stab: e0 - roots.heating.energy,
        cooling_clamped: roots.cooling.clamped,
        heating_clamped: roots.heating.clamped,
    })
}

/// `[Q_c^STAB, Q_h^STAB]` at energy `e0`, from `F* = E0 - S_min / beta`.
pub fn stab_heat_window(ctx: &ThermalContext, e0: f64) -> Result<HeatWindow> {
    let s = smin_stab_slice(ctx.hamiltonian(), e0)?;
    heat_window_from(ctx, e0, s.s_min)
}

/// Union of windows over `points` energies spread across `e0 +- delta_e`,
/// for an energy known only up to an error bar. Empty slices inside the band
/// are skipped; the band fails only when every slice is empty.
pub fn stab_heat_window_band(ctx: &ThermalContext, e0: f64, delta_e: f64, points: usize) -> Result<(f64, f64)> {
    let points = points.max(1);
    let energies: Vec<f64> = if delta_e == 0.0 || points == 1 {
        vec![e0]
    } else {
        (0..points).map(|k| e0 - delta_e + 2.0 * delta_e * k as f64 / (points - 1) as f64).collect()
    };
    let mut band: Option<(f64, f64)> = None;
    for e in energies {
        match stab_heat_window(ctx, e) {
            Ok(w) => {
                let (lo, hi) = band.unwrap_or((w.q_c_stab, w.q_h_stab));
                band = Some((lo.min(w.q_c_stab), hi.max(w.q_h_stab)));
            }
            Err(Error::EmptySlice(_)) => {}
            Err(e) => return Err(e),
        }
    }
    band.ok_or(Error::EmptySlice(e0))
}

/// Certified iff `q +- delta_q` lies entirely outside the window, or no
/// stabilizer state has energy `e0`.
pub fn detect_heat(ctx: &ThermalContext, e0: f64, q_measured: f64, delta_q: f64) -> Result<HeatVerdict> {
    match stab_heat_window(ctx, e0) {
        Ok(w) => Ok(classify(&w, q_measured, delta_q)),
        Err(Error::EmptySlice(_)) => Ok(HeatVerdict::Certified { reason: CertificationReason::EmptySlice }),
        Err(e) => Err(e),
    }
}

pub fn classify(w: &HeatWindow, q: f64, delta_q: f64) -> HeatVerdict {
    if q + delta_q < w.q_c_stab {
        HeatVerdict::Certified { reason: CertificationReason::BelowWindow }
    } else if q - delta_q > w.q_h_stab {
        HeatVerdict::Certified { reason: CertificationReason::AboveWindow }
    } else {
        HeatVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{qubit, z_sum};
    use crate::linalg::binary_entropy;

    #[test]
    fn qubit_balanced_slice() {
        let s = 1.0 / 3f64.sqrt();
        let h = qubit([s, s, s]).unwrap();
        let m = smin_stab_slice(&h, 0.0).unwrap();
        let expect = binary_entropy((1.0 + 0.5f64.sqrt()) / 2.0);
        assert!((m.s_min - expect).abs() < 1e-12);
        assert!(matches!(smin_stab_slice(&h, 0.9), Err(Error::EmptySlice(_))));
    }

    #[test]
    fn three_qubit_slices() {
        let h = z_sum(3).unwrap();
        assert_eq!(smin_stab_slice(&h, 1.0).unwrap().s_min, 0.0);
        let m = smin_stab_slice(&h, 1.5).unwrap();
        assert!(m.s_min > 0.0);
        assert!((m.s_min - 0.325083).abs() < 1e-6);
    }

    #[test]
    fn window_examples() {
        let ctx = ThermalContext::new(z_sum(3).unwrap(), 1.0).unwrap();
        let w = stab_heat_window(&ctx, 1.0).unwrap();
        let pure = ctx.optimal_heat_from(1.0, 0.0).unwrap();
        assert!((w.q_c_stab - pure.q_c).abs() < 1e-12 && (w.q_h_stab - pure.q_h).abs() < 1e-12);
        assert!(w.q_c_stab <= w.q_h_stab);
        assert_eq!(detect_heat(&ctx, 1.0, 0.5 * (w.q_c_stab + w.q_h_stab), 0.0).unwrap(), HeatVerdict::Inconclusive);
        assert!(detect_heat(&ctx, 3.5, 0.0, 0.0).unwrap().is_certified());

        // balanced qubit at E0 = 0, compared with a fine scan of the Gibbs curve
        let s = 1.0 / 3f64.sqrt();
        let ctx = ThermalContext::new(qubit([s, s, s]).unwrap(), 1.0).unwrap();
        let w = stab_heat_window(&ctx, 0.0).unwrap();
        let target = w.f_star;
        let closest = |xs: &mut dyn Iterator<Item = f64>| {
            xs.min_by(|a, b| (ctx.gibbs(*a).free_energy - target).abs().total_cmp(&(ctx.gibbs(*b).free_energy - target).abs())).unwrap()
        };
        let root = |side: f64| {
            let coarse = closest(&mut (-20_000..=20_000).map(|k| k as f64 * 1e-3).filter(|x| (x - 1.0) * side >= 0.0));
            closest(&mut (-100_000..=100_000).map(|k| coarse + k as f64 * 1e-8))
        };
        assert!((w.q_c_stab + ctx.gibbs(root(-1.0)).energy).abs() < 2e-8);
        assert!((w.q_h_stab + ctx.gibbs(root(1.0)).energy).abs() < 2e-8);

        // at the equilibrium energy with the equilibrium entropy the window holds 0
        let g = ctx.gibbs(1.0);
        let w = heat_window_from(&ctx, g.energy, g.entropy).unwrap();
        assert!(w.contains(0.0));
    }
}
