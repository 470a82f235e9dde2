pub mod cli;
pub mod dynamics;
pub mod error;
pub mod frustration;
pub mod hamiltonian;
pub mod linalg;
pub mod pauli;
pub mod perturbation;
pub mod stab_energy;
pub mod stabilizer;
pub mod thermo;

pub use error::{Error, Result};
pub use pauli::{Phase, PauliString};
