//! Signed Pauli strings: parsing, products and commutation.

use magic_heat::PauliString;

fn main() -> magic_heat::Result<()> {
    let a: PauliString = "XYZ".parse()?;
    let b: PauliString = "-ZZI".parse()?;
    let (phase, ab) = a.multiply(&b)?;
    println!("{a} * {b} = {} {ab}", phase.to_complex());
    println!("commute: {}", a.commutes(&b)?);
    println!("support of {a}: {}, Y count {}", a.support_size(), a.y_count());

    let big = PauliString::on_sites(100, &[(0, 'Z'), (99, 'Z')])?;
    let x0 = PauliString::single(100, 0, 'X')?;
    println!("Z0 Z99 and X0 on 100 qubits commute: {}", big.commutes(&x0)?);
    Ok(())
}
