use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{PauliString, MAX_DENSE_QUBITS};

pub const DENSITY_TOL: f64 = 1e-10;

/// A validated density operator on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks squareness, power-of-two size, Hermiticity, unit trace and
    /// positivity (all within `1e-10`).
    pub fn new(m: DMatrix<Complex64>) -> Result<DensityMatrix> {
        let dim = m.nrows();
        if dim != m.ncols() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensity(format!("shape {}x{}", m.nrows(), m.ncols())));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_DENSE_QUBITS));
        }
        let herm = (&m - m.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let min = linalg::hermitian_eigenvalues(&m)[0];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { n, m })
    }

    pub fn from_pure(v: &DVector<Complex64>) -> Result<DensityMatrix> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero vector".into()));
        }
        DensityMatrix::new(linalg::outer(&(v / Complex64::new(norm, 0.0))))
    }

    pub fn maximally_mixed(n: usize) -> DensityMatrix {
        let dim = 1usize << n;
        DensityMatrix { n, m: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0) }
    }

    /// `(1 + r.sigma)/2` for `|r| <= 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<DensityMatrix> {
        let h = 0.5;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h * (1.0 + r[2]), 0.0),
                Complex64::new(h * r[0], -h * r[1]),
                Complex64::new(h * r[0], h * r[1]),
                Complex64::new(h * (1.0 - r[2]), 0.0),
            ],
        );
        DensityMatrix::new(m)
    }

    /// Convex combination `(1 - w) a + w b`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if a.n != b.n {
            return Err(Error::QubitMismatch(a.n, b.n));
        }
        DensityMatrix::new(&a.m * Complex64::new(1.0 - w, 0.0) + &b.m * Complex64::new(w, 0.0))
    }

    pub fn kron(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.m.kronecker(&other.m))
    }

    /// Diagonal part in the computational basis.
    pub fn dephased(&self) -> DensityMatrix {
        let dim = self.m.nrows();
        let m = DMatrix::from_fn(dim, dim, |r, c| if r == c { self.m[(r, c)] } else { Complex64::new(0.0, 0.0) });
        DensityMatrix { n: self.n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    /// `tr(P rho)`, real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.n() != self.n {
            return Err(Error::QubitMismatch(self.n, p.n()));
        }
        Ok(p.trace_with(&self.m).re)
    }

    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.n != 1 {
            return Err(Error::QubitMismatch(1, self.n));
        }
        let c = |s: &str| self.expectation(&s.parse().unwrap()).unwrap();
        Ok([c("X"), c("Y"), c("Z")])
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        linalg::shannon(self.eigenvalues())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DensityMatrix::from_bloch([0.0, 0.0, 1.0]).is_ok());
        assert!(DensityMatrix::from_bloch([1.0, 1.0, 0.0]).is_err());
        let bad = DMatrix::from_element(3, 3, Complex64::new(1.0 / 3.0, 0.0));
        assert!(DensityMatrix::new(bad).is_err());
        let nonherm = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        );
        assert!(DensityMatrix::new(nonherm).is_err());
    }

    #[test]
    fn bloch_round_trip_and_entropy() {
        let r = [0.3, -0.2, 0.5];
        let rho = DensityMatrix::from_bloch(r).unwrap();
        let back = rho.bloch().unwrap();
        for k in 0..3 {
            assert!((back[k] - r[k]).abs() < 1e-14);
        }
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((mixed.entropy() - 4f64.ln()).abs() < 1e-12);
        assert!(DensityMatrix::from_bloch([0.0, 1.0, 0.0]).unwrap().entropy().abs() < 1e-12);
    }
}
