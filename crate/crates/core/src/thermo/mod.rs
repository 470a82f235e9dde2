//! Heat-based magic witness: Gibbs curves, optimal heats, the stabilizer heat
//! window and family thresholds. Entropies are in nats.

mod family;
mod gibbs;
mod qubit;
mod slice;

pub use family::{
    depolarized_h, dephased_t, crt_thresholds, family_sweep, family_thresholds, ghz3, heat_verdict, preset, Family, FamilyThresholds, SweepRow, PRESETS,
};
pub use gibbs::{BranchRoot, EffectiveTemperatures, GibbsPoint, OptimalHeat, ThermalContext, ROOT_TOL};
pub use qubit::{detect_qubit, r_star, QubitVerdict};
pub use slice::{
    classify, detect_heat, heat_window_from, smin_stab_slice, stab_heat_window, stab_heat_window_band, two_state_entropy,
    CertificationReason, HeatVerdict, HeatWindow, SliceMinimum, SLICE_TOL,
};
