//! Frustration graphs, commuting subsets and weighted independent sets.

use magic_heat::frustration::{build_graph, enumerate_cmax, mwis_bipartite, mwis_exact};
use magic_heat::hamiltonian::{tfim, PauliHamiltonian};
use magic_heat::stab_energy::{stab_energy_mwis, tfim_groups};

fn main() -> magic_heat::Result<()> {
    let h = PauliHamiltonian::from_weights(2, [("XX".parse()?, 3.0), ("YY".parse()?, 1.0), ("ZZ".parse()?, 3.0)])?;
    for s in enumerate_cmax(&h)? {
        let gens: Vec<String> = s.generators.iter().map(|g| g.to_string()).collect();
        println!("group <{}>: energy {}", gens.join(", "), s.energy(&h));
    }

    let chain = tfim(6, 0.7)?;
    let g = build_graph(&chain);
    print!("{}", g.to_edge_list());
    println!("bipartite: {}", g.bipartition().is_some());
    let exact = mwis_exact(&g)?;
    let flow = mwis_bipartite(&g)?.expect("bipartite");
    println!("MWIS weight {} (branch and bound), {} (min cut)", exact.weight, flow.weight);

    let (sz, sx) = tfim_groups(6)?;
    let r = stab_energy_mwis(&chain, &[sz, sx])?;
    println!("E_stab by MWIS: {}", r.value);
    Ok(())
}
