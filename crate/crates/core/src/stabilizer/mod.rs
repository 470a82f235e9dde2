//! Stabilizer groups, pure stabilizer states and the stabilizer polytope.

mod density;
mod enumerate;
pub(crate) mod group;
mod membership;

pub use density::{DensityMatrix, DENSITY_TOL};
pub use enumerate::{enumerate_pure_states, pure_state_count, pure_states, MAX_ENUMERATION_QUBITS};
pub use group::{parse_generators, StabilizerGroup, StabilizerState};
pub use membership::{polytope_membership, polytope_membership_lp, qubit_membership, Membership, BOUNDARY_TOL};

/// Alias matching the operation name used throughout the docs.
pub fn validate_group(gens: Vec<crate::pauli::PauliString>) -> crate::error::Result<StabilizerGroup> {
    StabilizerGroup::new(gens)
}
