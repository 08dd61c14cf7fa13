use resilient_ham::digraph::{read_edge_list, write_edge_list_file};
use resilient_ham::harness::parse_cycle;
use resilient_ham::{Digraph, VertexSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resilient-ham"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("resilient-ham-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_header_and_round_trips() {
    let d = scratch("gen");
    let f = d.join("g.txt");
    let out = run(&["gen", "--n", "200", "--p", "0.1", "--seed", "4", "--out", s(&f)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&f).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(header.len(), 2);
    assert_eq!(header[0], 200);
    assert_eq!(header[1], text.lines().count() - 1);
    let g = read_edge_list(&f).unwrap();
    assert_eq!(g.arc_count(), header[1]);
    // binomial mean 3980, sd about 60
    let mean = 200.0 * 199.0 * 0.1;
    assert!((g.arc_count() as f64 - mean).abs() < 5.0 * (mean * 0.9f64).sqrt());
}

#[test]
fn attack_r0_is_identity_and_cut_counts() {
    let d = scratch("attack");
    let (f, h) = (d.join("k.txt"), d.join("h.txt"));
    write_edge_list_file(&Digraph::complete(10), &f).unwrap();
    assert!(run(&["attack", "--in", s(&f), "--adversary", "random", "--r", "0", "--out", s(&h)]).status.success());
    assert_eq!(read_edge_list(&h).unwrap(), Digraph::complete(10));

    let out = run(&["attack", "--in", s(&f), "--adversary", "oneway-cut", "--cut-size", "3", "--out", s(&h)]);
    assert!(out.status.success());
    let g = read_edge_list(&h).unwrap();
    assert_eq!(g.arc_count(), 90 - 3 * 7);
    let (a, b) = (VertexSet::from_indices(10, 0..3), VertexSet::from_indices(10, 3..10));
    assert_eq!(g.edge_count_between(&b, &a), 0);

    let out = run(&["attack", "--in", s(&f), "--adversary", "random", "--r", "0.3", "--seed", "1", "--out", s(&h)]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["budget_ok"], serde_json::Value::Bool(true), "{report}");
}

#[test]
fn ham_exit_codes_and_reverification() {
    let d = scratch("ham");
    let (k, e, c) = (d.join("k.txt"), d.join("e.txt"), d.join("c.txt"));
    write_edge_list_file(&Digraph::complete(12), &k).unwrap();
    write_edge_list_file(&Digraph::empty(12), &e).unwrap();

    let out = run(&["ham", "--in", s(&k), "--preset", "permissive", "--out", s(&c)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cycle = parse_cycle(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(cycle.len(), 12);
    assert_eq!(run(&["verify", "--in", s(&k), "--cycle", s(&c)]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--in", s(&e), "--cycle", s(&c)]).status.code(), Some(2));

    let out = run(&["ham", "--in", s(&e)]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("stage=P1"), "{text}");
}

#[test]
fn oracle_and_check_print_json() {
    let d = scratch("oracle");
    let f = d.join("k.txt");
    write_edge_list_file(&Digraph::complete(6), &f).unwrap();
    let out = run(&["oracle", "--in", s(&f)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hamiltonian"], serde_json::Value::Bool(true));

    let out = run(&["check", "--in", s(&f), "--mode", "exact"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdicts"].as_array().map(Vec::len), Some(3), "{v}");
}

#[test]
fn scale_knobs_are_rejected_outside_ham_and_sweep() {
    let d = scratch("knobs");
    let f = d.join("k.txt");
    write_edge_list_file(&Digraph::complete(6), &f).unwrap();
    assert!(!run(&["oracle", "--in", s(&f), "--scale.k_floor=2"]).status.success());
    assert!(!run(&["ham", "--in", s(&f), "--scale.no_such_knob=2"]).status.success());
}

#[test]
fn sweep_writes_files_and_repeats_exactly() {
    let d = scratch("sweep");
    let (a, b) = (d.join("a"), d.join("b"));
    let args = |o: &Path| {
        let mut v: Vec<&str> =
            "sweep --n 40 --p 0.6 --r 0,0.3 --adversary random --trials 3 --seed 9 --preset permissive --out"
                .split_whitespace()
                .collect();
        v.push(s(o));
        run(&v)
    };
    assert!(args(&a).status.success());
    assert!(args(&b).status.success());
    let csv = std::fs::read_to_string(a.join("plot.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,p,adversary,r,trials,successes,rate"));
    assert_eq!(csv.lines().count(), 3);
    let strip = |p: &Path| -> Vec<serde_json::Value> {
        std::fs::read_to_string(p.join("trials.jsonl"))
            .unwrap()
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                resilient_ham::harness::strip_timings(&mut v);
                v
            })
            .collect()
    };
    let (ta, tb) = (strip(&a), strip(&b));
    assert_eq!(ta.len(), 6);
    assert_eq!(ta, tb);
}
