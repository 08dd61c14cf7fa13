//! End to end: a Hamilton cycle in D(1024, 0.15), verified, with the run
//! report's bookkeeping.
//!
//!     cargo run --release --example find_cycle [seed]

use resilient_ham::digraph::verify_hamilton_cycle;
use resilient_ham::engine::find_hamilton_cycle;
use resilient_ham::pseudorandom::PseudoParams;
use resilient_ham::random_models::gen_dnp;
use resilient_ham::scale::ScaleConfig;

fn main() -> resilient_ham::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let g = gen_dnp(1024, 0.15, seed)?;
    let pp = PseudoParams::new(g.n(), 0.05, g.density())?;
    let rep = find_hamilton_cycle(&g, &pp, &ScaleConfig::default(), seed);

    println!("outcome {:?} after {} restarts", rep.outcome, rep.retries.pipeline);
    if let Some(r) = &rep.resolved {
        println!(
            "k = {}, walk lengths {}/{}/{}, parts {:?}",
            r.k, r.chord_len, r.backbone_len, r.final_len, r.part_sizes
        );
    }
    println!("{:?}", rep.stats);
    println!("audit {:?}", rep.audit);
    for note in &rep.notes {
        println!("note: {note}");
    }
    for (stage, ms) in &rep.stage_timings {
        println!("{stage:>12}: {ms:.1} ms");
    }
    match &rep.cycle {
        Some(c) => println!("cycle of {} vertices, verifies: {}", c.len(), verify_hamilton_cycle(&g, c)),
        None => println!("failure: {:?}", rep.failure),
    }
    Ok(())
}
