use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauli,
    #[error("invalid Pauli character {0:?}")]
    BadPauliChar(char),
    #[error("{0} qubits exceeds the limit of {1}")]
    TooManyQubits(usize, usize),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generated group contains -1")]
    MinusIdentity,
    #[error("generator {0} is a product of the others")]
    DependentGenerator(usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("group has rank {0}, a pure state needs rank {1}")]
    NotMaximal(usize, usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("zero coefficient for term {0}")]
    ZeroCoefficient(String),
    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("{what} has {size} items, budget is {budget}")]
    Budget { what: &'static str, size: usize, budget: usize },
    #[error("premise violated: {0}")]
    Premise(String),
    #[error("no ground energy method available for n = {0}")]
    NoGroundMethod(usize),

    #[error("free energy {target} is below the equilibrium minimum {minimum}")]
    Infeasible { target: f64, minimum: f64 },
    #[error("no stabilizer state has energy {0}")]
    EmptySlice(f64),
    #[error("energy {0} is outside the feasible range")]
    InfeasibleEnergy(f64),
    #[error("family check failed: {0}")]
    Family(String),

    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("truncation diagnostic {0:e} exceeds tolerance")]
    Truncation(f64),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
