//! Certifying a positive stabilizer gap by perturbing a stabilizer Hamiltonian.

use magic_heat::hamiltonian::PauliHamiltonian;
use magic_heat::perturbation::{certify_gap_by_perturbation, check_coupling, BaseHamiltonian, GapCertificate};
use magic_heat::stabilizer::StabilizerGroup;

fn main() -> magic_heat::Result<()> {
    let bell = StabilizerGroup::new(vec!["XX".parse()?, "ZZ".parse()?])?;
    let base = BaseHamiltonian::unit(bell.clone());
    for (e1, e2) in [(0.05, -0.01), (0.2, 0.0), (0.1, -0.1)] {
        let v = PauliHamiltonian::from_coefficients(2, [(e1, "ZI".parse()?), (e2, "IZ".parse()?)].into_iter().filter(|t| t.0 != 0.0))?;
        println!("V = {e1} Z1 + {e2} Z2: couples = {}", check_coupling(&bell, &v)?);
        match certify_gap_by_perturbation(&base, &v)? {
            GapCertificate::GapCertified { lambda, energy, e_stab, report, .. } => {
                println!("  certified at lambda {lambda:.4}: energy {energy:.8} < E_stab {e_stab:.8} (v = {:.4}, a = {:.4})", report.v, report.a)
            }
            GapCertificate::PremisesFailed { failures } => println!("  premises failed: {failures:?}"),
        }
    }
    Ok(())
}
