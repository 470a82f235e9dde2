//! Hermitian Pauli strings in binary-symplectic form.
//!
//! Qubit `k` (the `k`-th character of the text form) occupies bit `n - 1 - k`
//! of the masks, which is also its bit in a computational basis index. Dense
//! realizations are therefore plain Kronecker products in reading order.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 128;
pub const MAX_DENSE_QUBITS: usize = 12;

/// A power of `i`, the phase picked up by a product of Hermitian Paulis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: u32) -> Phase {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::One | Phase::MinusOne)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString {
    n: usize,
    x: u128,
    z: u128,
    negative: bool,
}

#[inline]
pub(crate) fn mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Exponent of `i` in `P(x1,z1) P(x2,z2) = i^g P(x1^x2, z1^z2)` for Hermitian
/// (Y-convention) factors, summed over qubits, mod 4.
#[inline]
pub(crate) fn product_exponent(x1: u128, z1: u128, x2: u128, z2: u128) -> u32 {
    let y1 = x1 & z1;
    let xo = x1 & !z1;
    let zo = !x1 & z1;
    let plus = (y1 & !x2 & z2).count_ones() + (xo & x2 & z2).count_ones() + (zo & x2 & !z2).count_ones();
    let minus = (y1 & x2 & !z2).count_ones() + (xo & !x2 & z2).count_ones() + (zo & x2 & z2).count_ones();
    (plus + 4 * 128 - minus) % 4
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString { n, x: 0, z: 0, negative: false }
    }

    /// Builds from raw masks (basis-index bit order). Bits above `n` are rejected.
    pub fn from_bits(n: usize, x: u128, z: u128, negative: bool) -> Result<PauliString> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let m = mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::InvalidHamiltonian(format!("mask wider than {n} qubits")));
        }
        Ok(PauliString { n, x, z, negative })
    }

    pub(crate) fn from_bits_unchecked(n: usize, x: u128, z: u128, negative: bool) -> PauliString {
        PauliString { n, x, z, negative }
    }

    /// Single-qubit operator `letter` on qubit `k` of `n`.
    pub fn single(n: usize, k: usize, letter: char) -> Result<PauliString> {
        let mut chars = vec!['I'; n];
        if k >= n {
            return Err(Error::QubitMismatch(k, n));
        }
        chars[k] = letter;
        chars.into_iter().collect::<String>().parse()
    }

    /// Product of single-qubit letters at the given sites, e.g. `Z_i Z_j`.
    pub fn on_sites(n: usize, sites: &[(usize, char)]) -> Result<PauliString> {
        let mut chars = vec!['I'; n];
        for &(k, c) in sites {
            if k >= n {
                return Err(Error::QubitMismatch(k, n));
            }
            chars[k] = c;
        }
        chars.into_iter().collect::<String>().parse()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u128 {
        self.x
    }

    pub fn z_bits(&self) -> u128 {
        self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    /// Same pattern, sign `+1`.
    pub fn pattern(&self) -> PauliString {
        PauliString { negative: false, ..*self }
    }

    pub fn negated(&self) -> PauliString {
        PauliString { negative: !self.negative, ..*self }
    }

    pub fn with_negative(&self, negative: bool) -> PauliString {
        PauliString { negative, ..*self }
    }

    pub fn same_pattern(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    pub fn is_identity_pattern(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_pattern() && !self.negative
    }

    pub fn support_size(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Letter on qubit `k`.
    pub fn letter(&self, k: usize) -> char {
        let bit = 1u128 << (self.n - 1 - k);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// The letters without sign, used as the lexicographic sort key.
    pub fn letters(&self) -> String {
        (0..self.n).map(|k| self.letter(k)).collect()
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_n(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// `self * other = phase * product`. A real phase is folded into the
    /// product's sign and reported as `Phase::One`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        self.check_n(other)?;
        Ok(self.multiply_unchecked(other))
    }

    #[inline]
    pub(crate) fn multiply_unchecked(&self, other: &PauliString) -> (Phase, PauliString) {
        let mut k = product_exponent(self.x, self.z, other.x, other.z);
        if self.negative {
            k += 2;
        }
        if other.negative {
            k += 2;
        }
        let (x, z) = (self.x ^ other.x, self.z ^ other.z);
        match k % 4 {
            0 => (Phase::One, PauliString { n: self.n, x, z, negative: false }),
            2 => (Phase::One, PauliString { n: self.n, x, z, negative: true }),
            odd => (Phase::from_exponent(odd), PauliString { n: self.n, x, z, negative: false }),
        }
    }

    /// Action on a computational basis state: `P|b> = c |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let bb = b as u128;
        let mut k = self.y_count() + 2 * ((bb & self.z).count_ones() % 2);
        if self.negative {
            k += 2;
        }
        ((bb ^ self.x) as usize, Phase::from_exponent(k).to_complex())
    }

    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(self.n, MAX_DENSE_QUBITS));
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (row, c) = self.apply_to_basis(b);
            m[(row, b)] = c;
        }
        Ok(m)
    }

    /// `tr(P rho)` for a dense operator on `n` qubits.
    pub fn trace_with(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        let dim = rho.nrows();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..dim {
            let (r, ph) = self.apply_to_basis(c);
            acc += ph * rho[(c, r)];
        }
        acc
    }

    fn check_n(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<PauliString> {
        let text = text.trim();
        let (negative, body) = match text.chars().next() {
            Some('+') => (false, &text[1..]),
            Some('-') => (true, &text[1..]),
            _ => (false, text),
        };
        if body.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let (mut x, mut z) = (0u128, 0u128);
        for (k, c) in body.chars().enumerate() {
            let bit = 1u128 << (n - 1 - k);
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => x |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                'Z' => z |= bit,
                _ => return Err(Error::BadPauliChar(c)),
            }
        }
        Ok(PauliString { n, x, z, negative })
    }
}

impl TryFrom<String> for PauliString {
    type Error = Error;
    fn try_from(s: String) -> Result<PauliString> {
        s.parse()
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

/// All `4^n` sign-`+1` patterns in lexicographic order of letters (`I < X < Y < Z`).
pub fn all_patterns(n: usize) -> Vec<PauliString> {
    assert!(n <= 8, "pattern enumeration is limited to 8 qubits");
    let mut out = Vec::with_capacity(1 << (2 * n));
    for code in 0..(1usize << (2 * n)) {
        let (mut x, mut z) = (0u128, 0u128);
        for k in 0..n {
            let letter = (code >> (2 * (n - 1 - k))) & 3;
            let bit = 1u128 << (n - 1 - k);
            match letter {
                1 => x |= bit,
                2 => {
                    x |= bit;
                    z |= bit
                }
                3 => z |= bit,
                _ => {}
            }
        }
        out.push(PauliString { n, x, z, negative: false });
    }
    out
}
