//! Stabilizer heat windows and the heat witness verdict.

use magic_heat::hamiltonian::{qubit, z_sum};
use magic_heat::stabilizer::DensityMatrix;
use magic_heat::thermo::{detect_heat, detect_qubit, r_star, stab_heat_window, ThermalContext};

fn main() -> magic_heat::Result<()> {
    let s = 1.0 / 3f64.sqrt();
    let ctx = ThermalContext::new(qubit([s, s, s])?, 1.0)?;
    let w = stab_heat_window(&ctx, 0.0)?;
    println!("balanced qubit at E0 = 0: S_min {:.6}, window [{:.6}, {:.6}]", w.s_min, w.q_c_stab, w.q_h_stab);
    println!("R*(0) = {:.6}", r_star([s, s, s], 0.0)?);

    let pure = DensityMatrix::from_bloch([0.0, 0.7071067811865476, -0.7071067811865476])?;
    let q = ctx.optimal_heat(&pure)?;
    println!("pure state on the slice: Q_c {:.6}, verdict {:?}", q.q_c, detect_heat(&ctx, 0.0, q.q_c, 0.0)?);
    println!("closed form verdict: {:?}", detect_qubit([0.0, 0.7071067811865476, -0.7071067811865476], [s, s, s])?);

    let three = ThermalContext::new(z_sum(3)?, 1.0)?;
    for e0 in [1.0, 1.5, 2.0] {
        let w = stab_heat_window(&three, e0)?;
        println!("Z1+Z2+Z3 at E0 = {e0}: S_min {:.6}, window [{:.6}, {:.6}]", w.s_min, w.q_c_stab, w.q_h_stab);
    }
    Ok(())
}
