//! A small resilience sweep: success rate against the per-vertex deletion
//! budget r on paired seeds, written as JSON lines, JSON and CSV.
//!
//!     cargo run --release --example resilience_sweep [out-dir]

use resilient_ham::harness::{cmd_sweep, AdversaryKindArg, ExperimentConfig, SweepConfig};

fn main() -> resilient_ham::Result<()> {
    let out =
        std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("resilience-sweep").display().to_string());
    let mut base = ExperimentConfig::new(256, 0.3, 2024);
    base.trials = 10;
    base.alpha_from_r = true;
    base.out = Some(out.clone().into());
    let cfg = SweepConfig {
        ns: vec![256],
        ps: vec![0.3],
        rs: vec![0.0, 0.2, 0.35, 0.4, 0.45, 0.48],
        adversary: AdversaryKindArg::Random,
        cut_size: None,
        base,
    };
    let res = cmd_sweep(&cfg)?;
    for c in &res.summary.cells {
        println!("r = {:.2}: {:>2}/{} ({:.0}%)  failures {:?}", c.r, c.successes, c.trials, 100.0 * c.rate, c.failures);
    }
    println!("results in {out}");
    Ok(())
}
