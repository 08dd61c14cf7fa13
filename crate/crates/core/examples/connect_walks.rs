//! Disjoint sigma-walks between many pairs through a shared reservoir, with
//! the greedy strategy and with tree doubling.
//!
//!     cargo run --release --example connect_walks

use resilient_ham::connector::{audit_walks, connect_all, ConnectRequest};
use resilient_ham::pseudorandom::PseudoParams;
use resilient_ham::random_models::gen_dnp;
use resilient_ham::scale::{ConnectStrategy, ScaleConfig};
use resilient_ham::{SignPattern, VertexId, VertexSet};

fn main() -> resilient_ham::Result<()> {
    let n = 800;
    let g = gen_dnp(n, 0.3, 9)?;
    let pp = PseudoParams::new(n, 0.05, g.density())?;

    let pairs: Vec<(VertexId, VertexId)> = (0..12).map(|i| (VertexId(i), VertexId(100 + i))).collect();
    let k = VertexSet::from_indices(n, 200..n);
    let sigma: SignPattern = "+-++-+++-".parse()?;

    for (strategy, h_mult) in [(ConnectStrategy::Greedy, 0.01), (ConnectStrategy::Doubling, 0.025)] {
        let scale = ScaleConfig { strategy, h_mult, ..ScaleConfig::default() };
        let req = ConnectRequest::new(
            pairs[..if strategy == ConnectStrategy::Doubling { 6 } else { 12 }].to_vec(),
            k.clone(),
            sigma.clone(),
        )
        .with_hypothesis(pp);
        match connect_all(&g, &req, &scale, 4) {
            Ok(out) => {
                println!("{strategy:?}: {} walks, audit {:?}", out.walks.len(), audit_walks(&g, &req, &out.walks));
                for r in &out.trace {
                    println!("  {r}");
                }
                println!("  first walk {:?}", out.walks[0].vertices);
            }
            Err(e) => println!("{strategy:?}: {e}"),
        }
    }
    Ok(())
}
