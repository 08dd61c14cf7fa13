//! Random partitions whose degree guarantees are recounted before they are
//! returned: the five reservoirs and the path-cover segments.
//!
//!     cargo run --release --example partition_parts

use resilient_ham::partition::{partition_path_segments, partition_v1_v5};
use resilient_ham::pseudorandom::{q1_violations, PseudoParams};
use resilient_ham::random_models::gen_dnp;
use resilient_ham::scale::ScaleConfig;
use resilient_ham::{Error, VertexSet};

fn main() -> resilient_ham::Result<()> {
    let n = 2000;
    let g = gen_dnp(n, 0.05, 1)?;
    let pp = PseudoParams::new(n, 0.05, g.density())?;
    let scale = ScaleConfig::default();
    println!("resolved sizes: {:?}", scale.resolve(&pp)?.part_sizes);

    match partition_v1_v5(&g, &pp, &scale, 3) {
        Ok(parts) => {
            let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
            println!("V1..V5 sizes {sizes:?}, Q1 violations {}", q1_violations(&g, &parts, &pp).len());
        }
        Err(Error::BudgetExhausted { attempts, worst_violator, .. }) => {
            println!("no verified split in {attempts} attempts; worst violator {worst_violator:?}");
        }
        Err(e) => return Err(e),
    }

    let u = VertexSet::from_indices(n, 200..n);
    match partition_path_segments(&g, &u, &pp, &scale, 3) {
        Ok(sp) => {
            println!("{} segments of {}, {} left over", sp.segments.len(), sp.segments[0].len(), sp.leftover.len())
        }
        Err(e) => println!("segments: {e}"),
    }
    Ok(())
}
