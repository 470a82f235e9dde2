//! Enumerating pure stabilizer states and testing membership in their hull.

use magic_heat::stabilizer::{enumerate_pure_states, polytope_membership, pure_state_count, DensityMatrix};

fn main() -> magic_heat::Result<()> {
    for n in 1..=3 {
        println!("n = {n}: {} states (closed form {})", enumerate_pure_states(n)?.len(), pure_state_count(n));
    }

    let s = 1.0 / 3f64.sqrt();
    let t = DensityMatrix::from_bloch([s, s, s])?;
    let mixed = DensityMatrix::maximally_mixed(1);
    for p in [0.0, 0.2, 0.3, 0.5] {
        let rho = DensityMatrix::mix(&t, &mixed, p)?;
        let m = polytope_membership(&rho)?;
        println!("T state with depolarizing {p:.1}: outside = {}, margin {:.4}", m.is_outside(), m.margin());
    }

    let t2 = t.kron(&t)?;
    println!("two T states: outside = {}", polytope_membership(&t2)?.is_outside());
    Ok(())
}
