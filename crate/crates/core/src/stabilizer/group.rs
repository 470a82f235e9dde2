use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{product_exponent, PauliString, MAX_DENSE_QUBITS};

/// Position of the leading bit when `(x, z)` is read as one 256-bit word with
/// the X part on top.
#[inline]
pub(crate) fn lead(x: u128, z: u128) -> Option<u32> {
    if x != 0 {
        Some(128 + 127 - x.leading_zeros())
    } else if z != 0 {
        Some(127 - z.leading_zeros())
    } else {
        None
    }
}

#[inline]
pub(crate) fn has_bit(x: u128, z: u128, idx: u32) -> bool {
    if idx >= 128 {
        x >> (idx - 128) & 1 == 1
    } else {
        z >> idx & 1 == 1
    }
}

/// An operator `i^exp P(x, z)` accumulated during reduction.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Phased {
    pub exp: u32,
    pub x: u128,
    pub z: u128,
}

impl Phased {
    pub fn from(p: &PauliString) -> Phased {
        Phased { exp: if p.is_negative() { 2 } else { 0 }, x: p.x_bits(), z: p.z_bits() }
    }

    pub fn mul(&mut self, p: &PauliString) {
        self.exp += product_exponent(self.x, self.z, p.x_bits(), p.z_bits());
        if p.is_negative() {
            self.exp += 2;
        }
        self.exp %= 4;
        self.x ^= p.x_bits();
        self.z ^= p.z_bits();
    }

    pub fn is_identity_pattern(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

/// Signed generators kept in fully reduced row-echelon form, sorted by
/// descending pivot. For a given group this form is unique, so it doubles as
/// the canonical serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SignedBasis {
    pub n: usize,
    pub rows: Vec<PauliString>,
    pub pivots: Vec<u32>,
}

pub(crate) enum Insert {
    Added,
    Dependent,
    MinusIdentity,
}

impl SignedBasis {
    pub fn new(n: usize) -> SignedBasis {
        SignedBasis { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, p: &PauliString) -> Phased {
        let mut r = Phased::from(p);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if has_bit(r.x, r.z, piv) {
                r.mul(row);
            }
        }
        r
    }

    /// +1 if `p` is in the group, -1 if `-p` is, 0 otherwise.
    pub fn character(&self, p: &PauliString) -> i8 {
        let r = self.reduce(p);
        if !r.is_identity_pattern() {
            return 0;
        }
        match r.exp {
            0 => 1,
            2 => -1,
            _ => 0,
        }
    }

    pub fn in_span(&self, p: &PauliString) -> bool {
        self.reduce(p).is_identity_pattern()
    }

    /// Adds a generator that commutes with every row.
    pub fn insert(&mut self, p: &PauliString) -> Insert {
        let r = self.reduce(p);
        if r.is_identity_pattern() {
            return if r.exp == 2 { Insert::MinusIdentity } else { Insert::Dependent };
        }
        debug_assert!(r.exp % 2 == 0);
        let new = PauliString::from_bits_unchecked(self.n, r.x, r.z, r.exp == 2);
        let piv = lead(r.x, r.z).unwrap();
        for row in self.rows.iter_mut() {
            if has_bit(row.x_bits(), row.z_bits(), piv) {
                let (_, prod) = row.multiply_unchecked(&new);
                *row = prod;
            }
        }
        let pos = self.pivots.iter().position(|&q| q < piv).unwrap_or(self.pivots.len());
        self.rows.insert(pos, new);
        self.pivots.insert(pos, piv);
        Insert::Added
    }

    pub fn commutes_with_all(&self, p: &PauliString) -> bool {
        self.rows.iter().all(|g| g.commutes_unchecked(p))
    }
}

/// Unsigned span of Pauli patterns over GF(2), for rank arguments.
#[derive(Clone, Debug, Default)]
pub(crate) struct PatternBasis {
    rows: Vec<(u128, u128, u32)>,
}

impl PatternBasis {
    pub fn new() -> PatternBasis {
        PatternBasis { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut x: u128, mut z: u128) -> (u128, u128) {
        // rows are kept in descending pivot order, each pivot cleared from later rows
        for &(rx, rz, piv) in &self.rows {
            if has_bit(x, z, piv) {
                x ^= rx;
                z ^= rz;
            }
        }
        (x, z)
    }

    /// Returns false when `p` was already in the span.
    pub fn insert(&mut self, p: &PauliString) -> bool {
        let (x, z) = self.reduce(p.x_bits(), p.z_bits());
        let Some(piv) = lead(x, z) else { return false };
        for row in self.rows.iter_mut() {
            if has_bit(row.0, row.1, piv) {
                row.0 ^= x;
                row.1 ^= z;
            }
        }
        let pos = self.rows.iter().position(|r| r.2 < piv).unwrap_or(self.rows.len());
        self.rows.insert(pos, (x, z, piv));
        true
    }
}

/// A vector commuting with every row of `basis` but outside its span, when
/// the span is not yet maximal isotropic.
pub(crate) fn complement_vector(basis: &SignedBasis) -> Option<PauliString> {
    let n = basis.n;
    // Equations <w, v> = 0 in variables (vx on the high word, vz on the low word).
    let mut eqs: Vec<(u128, u128, u32)> = Vec::new();
    for w in &basis.rows {
        let (mut hi, mut lo) = (w.z_bits(), w.x_bits());
        for &(ex, ez, piv) in &eqs {
            if has_bit(hi, lo, piv) {
                hi ^= ex;
                lo ^= ez;
            }
        }
        if let Some(piv) = lead(hi, lo) {
            for e in eqs.iter_mut() {
                if has_bit(e.0, e.1, piv) {
                    e.0 ^= hi;
                    e.1 ^= lo;
                }
            }
            eqs.push((hi, lo, piv));
        }
    }
    let pivots: Vec<u32> = eqs.iter().map(|e| e.2).collect();
    let columns = (0..n as u32).map(|k| 128 + k).chain(0..n as u32);
    for free in columns {
        if pivots.contains(&free) {
            continue;
        }
        let (mut vx, mut vz) = (0u128, 0u128);
        let mut set = |idx: u32| {
            if idx >= 128 {
                vx |= 1 << (idx - 128);
            } else {
                vz |= 1 << idx;
            }
        };
        set(free);
        for &(ex, ez, piv) in &eqs {
            if has_bit(ex, ez, free) {
                set(piv);
            }
        }
        let v = PauliString::from_bits_unchecked(n, vx, vz, false);
        if !basis.in_span(&v) {
            return Some(v);
        }
    }
    None
}

/// Abelian group of signed Paulis not containing -1.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<PauliString>", into = "Vec<PauliString>")]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
    basis: SignedBasis,
}

/// Groups compare by their canonical form, not by the generators supplied.
impl PartialEq for StabilizerGroup {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for StabilizerGroup {}

impl std::hash::Hash for StabilizerGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.basis.hash(state)
    }
}

impl StabilizerGroup {
    /// Validates generators: equal `n`, pairwise commuting, independent, and
    /// not generating -1.
    pub fn new(gens: Vec<PauliString>) -> Result<StabilizerGroup> {
        let Some(first) = gens.first() else { return Err(Error::NoGenerators) };
        let n = first.n();
        for g in &gens {
            if g.n() != n {
                return Err(Error::QubitMismatch(n, g.n()));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes_unchecked(&gens[j]) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        let mut basis = SignedBasis::new(n);
        for (i, g) in gens.iter().enumerate() {
            match basis.insert(g) {
                Insert::Added => {}
                Insert::Dependent => return Err(Error::DependentGenerator(i)),
                Insert::MinusIdentity => return Err(Error::MinusIdentity),
            }
        }
        Ok(StabilizerGroup { n, generators: gens, basis })
    }

    pub(crate) fn from_basis(basis: SignedBasis) -> StabilizerGroup {
        StabilizerGroup { n: basis.n, generators: basis.rows.clone(), basis }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Reduced row-echelon generators; equal for equal groups.
    pub fn canonical_generators(&self) -> &[PauliString] {
        &self.basis.rows
    }

    pub(crate) fn basis(&self) -> &SignedBasis {
        &self.basis
    }

    /// Stabilizer character: +1 if `p` is in the group, -1 if `-p` is, else 0.
    pub fn character(&self, p: &PauliString) -> Result<i8> {
        if p.n() != self.n {
            return Err(Error::QubitMismatch(self.n, p.n()));
        }
        Ok(self.basis.character(p))
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        p.n() == self.n && self.basis.character(p) == 1
    }

    pub fn commutes_with_all(&self, p: &PauliString) -> bool {
        self.basis.commutes_with_all(p)
    }

    /// All `2^rank` signed elements.
    pub fn elements(&self) -> Vec<PauliString> {
        assert!(self.rank() <= 20, "group too large to list");
        let rows = &self.basis.rows;
        let mut out = Vec::with_capacity(1 << rows.len());
        for mask in 0..(1usize << rows.len()) {
            let mut acc = PauliString::identity(self.n);
            for (k, r) in rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc = acc.multiply_unchecked(r).1;
                }
            }
            out.push(acc);
        }
        out
    }

    /// Generators that complete this group to a maximal one (all signs `+`).
    pub fn logical_completion(&self) -> Vec<PauliString> {
        let mut basis = self.basis.clone();
        let mut extra = Vec::new();
        while basis.rank() < self.n {
            let v = complement_vector(&basis).expect("isotropic subspace below maximal rank");
            basis.insert(&v);
            extra.push(v);
        }
        extra
    }

    /// The `2^(n - rank)` stabilizer states spanning the codespace, one per
    /// sign choice of the completing generators.
    pub fn code_basis_states(&self) -> Vec<StabilizerState> {
        let extra = self.logical_completion();
        assert!(extra.len() <= 16, "codespace too large to list");
        (0..(1usize << extra.len()))
            .map(|signs| {
                let mut basis = self.basis.clone();
                for (k, e) in extra.iter().enumerate() {
                    basis.insert(&e.with_negative(signs >> k & 1 == 1));
                }
                StabilizerState { group: StabilizerGroup::from_basis(basis) }
            })
            .collect()
    }

    /// Applies the codespace projector `prod (1 + g)/2` to a dense vector.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = v.clone();
        for g in &self.basis.rows {
            let mut next = out.clone();
            for b in 0..out.len() {
                let (r, c) = g.apply_to_basis(b);
                next[r] += c * out[b];
            }
            out = next * Complex64::new(0.5, 0.0);
        }
        out
    }
}

impl TryFrom<Vec<PauliString>> for StabilizerGroup {
    type Error = Error;
    fn try_from(g: Vec<PauliString>) -> Result<StabilizerGroup> {
        StabilizerGroup::new(g)
    }
}

impl From<StabilizerGroup> for Vec<PauliString> {
    fn from(g: StabilizerGroup) -> Vec<PauliString> {
        g.generators
    }
}

impl fmt::Display for StabilizerGroup {
    /// One signed Pauli per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses the one-Pauli-per-line form written by `Display`.
pub fn parse_generators(text: &str) -> Result<StabilizerGroup> {
    let gens = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect::<Result<Vec<PauliString>>>()?;
    StabilizerGroup::new(gens)
}

/// A pure stabilizer state: a group of rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StabilizerGroup", into = "StabilizerGroup")]
pub struct StabilizerState {
    group: StabilizerGroup,
}

impl StabilizerState {
    pub fn new(group: StabilizerGroup) -> Result<StabilizerState> {
        if group.rank() != group.n() {
            return Err(Error::NotMaximal(group.rank(), group.n()));
        }
        Ok(StabilizerState { group })
    }

    pub fn from_generators(gens: Vec<PauliString>) -> Result<StabilizerState> {
        StabilizerState::new(StabilizerGroup::new(gens)?)
    }

    pub(crate) fn from_basis(basis: SignedBasis) -> StabilizerState {
        debug_assert_eq!(basis.rank(), basis.n);
        StabilizerState { group: StabilizerGroup::from_basis(basis) }
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    /// `<S|P|S>`, always -1, 0 or +1.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        self.group.character(p)
    }

    pub(crate) fn expectation_unchecked(&self, p: &PauliString) -> i8 {
        self.group.basis.character(p)
    }

    pub fn state_vector(&self) -> Result<DVector<Complex64>> {
        let n = self.n();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_DENSE_QUBITS));
        }
        // Z-type rows pin the support; a basis index on it has nonzero projection.
        let mut b = 0usize;
        for row in &self.group.basis.rows {
            if row.x_bits() == 0 && row.is_negative() {
                b |= 1usize << (127 - row.z_bits().leading_zeros());
            }
        }
        let mut v = DVector::zeros(1 << n);
        v[b] = Complex64::new(1.0, 0.0);
        let v = self.group.project(&v);
        let norm = v.norm();
        Ok(v / Complex64::new(norm, 0.0))
    }
}

impl TryFrom<StabilizerGroup> for StabilizerState {
    type Error = Error;
    fn try_from(g: StabilizerGroup) -> Result<StabilizerState> {
        StabilizerState::new(g)
    }
}

impl From<StabilizerState> for StabilizerGroup {
    fn from(s: StabilizerState) -> StabilizerGroup {
        s.group
    }
}

impl fmt::Display for StabilizerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.group.canonical_generators().iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", rows.join(", "))
    }
}
