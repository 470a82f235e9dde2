#![allow(dead_code)]

use magic_heat::frustration::is_sum_of_stabilizers;
use magic_heat::hamiltonian::PauliHamiltonian;
use magic_heat::perturbation::BaseHamiltonian;
use magic_heat::stabilizer::{pure_states, StabilizerGroup};
use magic_heat::PauliString;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_pauli(rng: &mut TestRng, n: usize) -> PauliString {
    let mask = (1u128 << n) - 1;
    loop {
        let (x, z) = (rng.gen::<u128>() & mask, rng.gen::<u128>() & mask);
        if x | z != 0 {
            return PauliString::from_bits(n, x, z, rng.gen()).unwrap();
        }
    }
}

/// `-sum w P` with `m` random signed terms and weights in `[0.1, 2)`.
pub fn random_hamiltonian(rng: &mut TestRng, n: usize, m: usize) -> PauliHamiltonian {
    loop {
        let pairs: Vec<(PauliString, f64)> = (0..m).map(|_| (random_pauli(rng, n), rng.gen_range(0.1..2.0))).collect();
        let h = PauliHamiltonian::from_weights(n, pairs).unwrap();
        if !h.is_empty() {
            return h;
        }
    }
}

/// GF(2) rank of the patterns, as a test-side oracle.
pub fn pattern_rank(ps: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = Vec::new();
    for p in ps {
        let mut v = (p.x_bits() << 64) | p.z_bits();
        for r in &rows {
            v = v.min(v ^ r);
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

/// Two or three groups whose generators are jointly independent, each
/// weighted uniformly; cross-group terms anticommute at random.
pub fn random_sum_of_stabilizers(rng: &mut TestRng, n: usize) -> (PauliHamiltonian, Vec<StabilizerGroup>) {
    loop {
        let groups = rng.gen_range(2..=3);
        let mut chosen: Vec<PauliString> = Vec::new();
        let mut gens: Vec<Vec<PauliString>> = Vec::new();
        for _ in 0..groups {
            let size = rng.gen_range(1..=2);
            let mut g: Vec<PauliString> = Vec::new();
            for _ in 0..50 {
                if g.len() == size {
                    break;
                }
                let p = random_pauli(rng, n);
                let mut trial = chosen.clone();
                trial.push(p);
                if g.iter().all(|q| q.commutes(&p).unwrap()) && pattern_rank(&trial) == trial.len() {
                    chosen.push(p);
                    g.push(p);
                }
            }
            if !g.is_empty() {
                gens.push(g);
            }
        }
        if gens.len() < 2 {
            continue;
        }
        let mut pairs = Vec::new();
        for g in &gens {
            let w = rng.gen_range(0.2..2.0);
            pairs.extend(g.iter().map(|p| (*p, w)));
        }
        let h = PauliHamiltonian::from_weights(n, pairs).unwrap();
        let groups: Vec<StabilizerGroup> = gens.into_iter().map(|g| StabilizerGroup::new(g).unwrap()).collect();
        assert!(is_sum_of_stabilizers(&h, &groups).unwrap());
        return (h, groups);
    }
}

/// A full-rank base from a random stabilizer state and a small perturbation
/// whose every term anticommutes with some generator.
pub fn random_perturbation(rng: &mut TestRng, n: usize) -> (BaseHamiltonian, PauliHamiltonian) {
    let states = pure_states(n);
    let group = states[rng.gen_range(0..states.len())].group().clone();
    let weights: Vec<f64> = group.generators().iter().map(|_| rng.gen_range(0.5..1.5)).collect();
    let base = BaseHamiltonian::new(group, weights).unwrap();
    loop {
        let m = rng.gen_range(1..=3);
        let budget = 0.3 * base.gap();
        let terms: Vec<PauliString> = (0..m).map(|_| random_pauli(rng, n)).filter(|p| !base.group.commutes_with_all(p)).collect();
        if terms.is_empty() {
            continue;
        }
        let raw: Vec<f64> = terms.iter().map(|_| rng.gen_range(0.2..1.0)).collect();
        let scale = budget / raw.iter().sum::<f64>();
        let v = PauliHamiltonian::from_weights(n, terms.into_iter().zip(raw.into_iter().map(|w| w * scale))).unwrap();
        if !v.is_empty() {
            return (base, v);
        }
    }
}
