//! Heat witness along the dephased three-qubit family under `Z1 + Z2 + Z3`.

use magic_heat::thermo::{family_sweep, family_thresholds, ghz3};

fn main() -> magic_heat::Result<()> {
    let family = ghz3();
    let beta = 0.01;
    let t = family_thresholds(&family, beta, 1e-4)?;
    println!("E0 = {:.6}, S_min = {:.6}", t.e0, t.s_min);
    println!("lambda_crt = {:.4} (entropy crossing {:.4}), lambda_star = {:.4}", t.lambda_crt, t.lambda_crt_entropy, t.lambda_star);
    println!("{:>6} {:>10} {:>10} {:>10} {}", "lambda", "S", "Q_c", "Q_c_stab", "verdict");
    for row in family_sweep(&family, beta, 11)? {
        println!("{:>6.2} {:>10.5} {:>10.5} {:>10.5} {}", row.lambda, row.s, row.q_c, row.q_c_stab, row.verdict);
    }
    Ok(())
}
