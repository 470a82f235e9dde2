use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::group::{Insert, SignedBasis, StabilizerState};
use crate::error::{Error, Result};
use crate::pauli::{all_patterns, PauliString};

pub const MAX_ENUMERATION_QUBITS: usize = 3;

/// `2^n prod_{k=1..n} (2^k + 1)`.
pub fn pure_state_count(n: usize) -> u64 {
    (1..=n as u32).fold(1u64 << n, |acc, k| acc * ((1u64 << k) + 1))
}

/// Every pure stabilizer state on `n <= 3` qubits, in canonical order.
pub fn enumerate_pure_states(n: usize) -> Result<Vec<StabilizerState>> {
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_ENUMERATION_QUBITS));
    }
    let patterns: Vec<PauliString> = all_patterns(n).into_iter().skip(1).collect();
    let mut subspaces = BTreeSet::new();
    grow(&patterns, 0, &mut SignedBasis::new(n), &mut subspaces);

    let mut states = Vec::with_capacity(subspaces.len() << n);
    for rows in subspaces {
        for signs in 0..(1usize << n) {
            let mut basis = SignedBasis::new(n);
            for (k, &(x, z)) in rows.iter().enumerate() {
                let g = PauliString::from_bits_unchecked(n, x, z, signs >> k & 1 == 1);
                basis.insert(&g);
            }
            states.push(StabilizerState::from_basis(basis));
        }
    }
    Ok(states)
}

/// Cached enumeration; panics outside `1..=3`.
pub fn pure_states(n: usize) -> &'static [StabilizerState] {
    static TABLES: [OnceLock<Vec<StabilizerState>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[n - 1].get_or_init(|| enumerate_pure_states(n).expect("n in 1..=3"))
}

/// Depth-first search over maximal isotropic subspaces, adding patterns in
/// increasing index order; subspaces are deduplicated by their reduced form.
fn grow(patterns: &[PauliString], from: usize, basis: &mut SignedBasis, out: &mut BTreeSet<Vec<(u128, u128)>>) {
    if basis.rank() == basis.n {
        out.insert(basis.rows.iter().map(|r| (r.x_bits(), r.z_bits())).collect());
        return;
    }
    for i in from..patterns.len() {
        let p = &patterns[i];
        if !basis.commutes_with_all(p) || basis.in_span(p) {
            continue;
        }
        let mut next = basis.clone();
        if let Insert::Added = next.insert(p) {
            // signs are irrelevant at this stage; keep every row positive
            for r in next.rows.iter_mut() {
                *r = r.pattern();
            }
            grow(patterns, i + 1, &mut next, out);
        }
    }
}
