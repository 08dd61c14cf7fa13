//! Certify P1-P3 exactly on a small digraph and by sampling on a large one.
//!
//!     cargo run --release --example pseudorandom_checks

use resilient_ham::pseudorandom::{check_p1, check_p2, check_p3, CheckMode, PseudoParams};
use resilient_ham::random_models::gen_dnp;

fn main() -> resilient_ham::Result<()> {
    let small = gen_dnp(12, 0.7, 3)?;
    let pp = PseudoParams::new(12, 0.05, small.density())?;
    println!("n = 12, p = {:.3}", pp.p);
    for v in
        [check_p1(&small, &pp)?, check_p2(&small, &pp, CheckMode::Exact)?, check_p3(&small, &pp, CheckMode::Exact)?]
    {
        println!("  {}: {:?}  witness {:?}", v.property, v.status, v.witness);
    }

    let big = gen_dnp(2000, 0.05, 3)?;
    let pp = PseudoParams::new(2000, 0.05, big.density())?;
    let mode = CheckMode::Sampled { trials: 10_000, seed: 11 };
    println!(
        "n = 2000, p = {:.4}: P1 needs semi-degree {:.1}, P2 caps sets at {}, P3 floor {}",
        pp.p,
        pp.p1_threshold(),
        pp.p2_cap(),
        pp.p3_floor()
    );
    for v in [check_p1(&big, &pp)?, check_p2(&big, &pp, mode)?, check_p3(&big, &pp, mode)?] {
        println!("  {}: {:?} after {} trials ({:.1} ms)", v.property, v.status, v.trials, v.elapsed_ms);
        if let Some(w) = &v.witness {
            println!("    witness recounts: {}", w.recheck(&big, &pp, None));
        }
    }
    Ok(())
}
