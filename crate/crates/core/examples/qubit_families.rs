//! Detection thresholds along the two single-qubit noisy families.

use magic_heat::thermo::{dephased_t, depolarized_h, family_sweep, family_thresholds};

fn main() -> magic_heat::Result<()> {
    for family in [depolarized_h(), dephased_t()] {
        let t = family_thresholds(&family, 1.0, 1e-9)?;
        println!("{}: E0 {:.6}, lambda_crt {:.8}, lambda_star {:.8}", family.name, t.e0, t.lambda_crt, t.lambda_star);
        for row in family_sweep(&family, 1.0, 6)? {
            println!("  lambda {:.1}: Q_c {:>9.5} vs {:>9.5} {}", row.lambda, row.q_c, row.q_c_stab, row.verdict);
        }
    }
    Ok(())
}
