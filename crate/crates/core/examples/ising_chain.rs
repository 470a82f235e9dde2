//! Stabilizer gap of the periodic transverse-field Ising chain.

use magic_heat::hamiltonian::tfim;
use magic_heat::stab_energy::{stabilizer_gap, tfim_gap, tfim_stab_energy_exact};
use num_rational::Ratio;

fn main() -> magic_heat::Result<()> {
    let n = 100;
    println!("{:>5} {:>12} {:>12} {:>10}", "h", "E_gs/n", "E_stab/n", "gap/n");
    for k in 0..=10 {
        let h = 0.2 * k as f64;
        let g = tfim_gap(n, h);
        println!("{h:>5.2} {:>12.6} {:>12.6} {:>10.6}", g.e_gs / n as f64, g.e_stab / n as f64, g.delta / n as f64);
    }

    let exact = tfim_stab_energy_exact(n, Ratio::new(3, 2))?;
    println!("exact E_stab at h = 3/2: {exact}");

    let small = stabilizer_gap(&tfim(8, 1.0)?)?;
    println!("n = 8 from the general search: gap {:.6}", small.delta);
    Ok(())
}
