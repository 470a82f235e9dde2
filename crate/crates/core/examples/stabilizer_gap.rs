//! Stabilizer ground energies and gaps, and the energy witness they give.

use magic_heat::hamiltonian::{bell_perturbed, heisenberg};
use magic_heat::stab_energy::{bell_witness_grid, stab_energy, stabilizer_gap, Verdict};

fn main() -> magic_heat::Result<()> {
    for eps in [0.5, 1.0, 1.5, 2.0] {
        let g = stabilizer_gap(&bell_perturbed(eps)?)?;
        println!("Bell eps = {eps}: E_stab {:.6}, E_gs {:.6}, gap {:.6}", g.e_stab, g.e_gs, g.delta);
    }

    for n in 3..=5 {
        let h = heisenberg(n)?;
        let r = stab_energy(&h)?;
        println!("Heisenberg n = {n}: E_stab {} by {:?}, gap {:.1e}", r.value, r.method, stabilizer_gap(&h)?.delta);
    }

    let grid = bell_witness_grid(1.5, 31, 60)?;
    let certified = grid.iter().filter(|p| p.verdict == Verdict::CertifiedNonstabilizer).count();
    println!("eps = 1.5: {certified} of {} grid states have energy below E_stab", grid.len());
    Ok(())
}
