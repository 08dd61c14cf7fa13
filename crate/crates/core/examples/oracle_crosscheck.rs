//! The exact oracles against each other: Held-Karp against permutations,
//! Hopcroft-Karp against subset enumeration, and sigma-walk enumeration.
//!
//!     cargo run --release --example oracle_crosscheck

use resilient_ham::matching::{max_bipartite_matching, BipartiteInstance};
use resilient_ham::oracle::{brute_matching, enumerate_sigma_walks, held_karp_hamiltonian, permutation_hamiltonian};
use resilient_ham::random_models::gen_dnp;
use resilient_ham::{Digraph, Sign, SignPattern, VertexId, VertexSet};

fn main() -> resilient_ham::Result<()> {
    let mut ham = 0;
    for seed in 0..200 {
        let g = gen_dnp(2 + seed as usize % 6, 0.5, seed)?;
        let hk = held_karp_hamiltonian(&g)?;
        assert_eq!(hk.is_some(), permutation_hamiltonian(&g)?);
        ham += hk.is_some() as usize;
    }
    println!("Held-Karp = permutation on 200 digraphs ({ham} Hamiltonian)");

    for seed in 0..200 {
        let g = gen_dnp(16, 0.2, 1000 + seed)?;
        let inst = BipartiteInstance::new(
            &g,
            VertexSet::from_indices(16, 0..8),
            VertexSet::from_indices(16, 8..16),
            Sign::Plus,
        )?;
        assert_eq!(max_bipartite_matching(&inst).len(), brute_matching(&inst)?);
    }
    println!("Hopcroft-Karp = brute force on 200 bipartite instances");

    let g = Digraph::complete(5);
    let sigma: SignPattern = "+-+".parse()?;
    let walks = enumerate_sigma_walks(&g, VertexId(0), VertexId(1), &sigma)?;
    println!("{} walks 0 ~> 1 realizing {sigma} in K5, e.g. {:?}", walks.len(), walks[0].vertices);
    Ok(())
}
