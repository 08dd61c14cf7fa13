use proptest::prelude::*;
use resilient_ham::absorber::{absorber_sigma, absorber_template};
use resilient_ham::connector::{connect_all, x1_expected, ConnectRequest};
use resilient_ham::digraph::{conforms_to, parse_edge_list, verify_hamilton_cycle, write_edge_list};
use resilient_ham::engine::{find_hamilton_cycle, flatten, merge_blocks};
use resilient_ham::harness::cycle_hash;
use resilient_ham::matching::{max_bipartite_matching, BipartiteInstance};
use resilient_ham::oracle::{brute_matching, enumerate_sigma_walks, held_karp_hamiltonian, permutation_hamiltonian};
use resilient_ham::partition::{random_partition_with_degrees, PartitionRequest};
use resilient_ham::pseudorandom::{check_p1, PseudoParams};
use resilient_ham::random_models::{apply_adversary, gen_dnp, verify_budget, AdversarySpec};
use resilient_ham::rng;
use resilient_ham::scale::{ConnectStrategy, ScaleConfig};
use resilient_ham::{Digraph, Error, Sign, SignPattern, VertexId, VertexSet, Walk};
use std::collections::BTreeSet;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p, s)| gen_dnp(n, p, s).unwrap())
}

fn pattern(max_len: usize) -> impl Strategy<Value = SignPattern> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(|bs| {
        SignPattern::new(bs.into_iter().map(|b| if b { Sign::Plus } else { Sign::Minus }).collect()).unwrap()
    })
}

fn set(n: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), n)
        .prop_map(move |bs| VertexSet::from_indices(n, bs.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_sums_match_arc_count(g in digraph(40)) {
        let outs: usize = g.vertices().map(|v| g.out_degree(v)).sum();
        let ins: usize = g.vertices().map(|v| g.in_degree(v)).sum();
        prop_assert_eq!(outs, g.arc_count());
        prop_assert_eq!(ins, g.arc_count());
        prop_assert!(g.arcs().all(|(u, v)| u != v && g.has_arc(u, v)));
    }

    #[test]
    fn edge_list_round_trips(g in digraph(30)) {
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn generation_is_seeded(n in 1usize..60, p in 0.0..=1.0f64, s in any::<u64>()) {
        prop_assert_eq!(gen_dnp(n, p, s).unwrap(), gen_dnp(n, p, s).unwrap());
    }

    #[test]
    fn reverse_complement_is_an_involution(s in pattern(20)) {
        let r = s.reverse_complement();
        prop_assert_eq!(r.len(), s.len());
        prop_assert_eq!(r.reverse_complement(), s.clone());
        for i in 0..s.len() {
            prop_assert_eq!(r.at(i), s.at(s.len() - 1 - i).complement());
        }
    }

    #[test]
    fn reversed_walk_conforms_iff_walk_does(g in digraph(8), s in pattern(4), seed in any::<u64>()) {
        prop_assume!(g.n() >= 2);
        let a = VertexId((seed % g.n() as u64) as u32);
        let b = VertexId(((seed >> 8) % g.n() as u64) as u32);
        for w in enumerate_sigma_walks(&g, a, b, &s).unwrap() {
            prop_assert!(conforms_to(&g, &w));
            prop_assert!(conforms_to(&g, &w.reversed()));
        }
    }

    #[test]
    fn set_algebra(a in set(50), b in set(50)) {
        prop_assert_eq!(a.union(&b).len() + a.intersection(&b).len(), a.len() + b.len());
        prop_assert!(a.difference(&b).is_disjoint(&b));
        prop_assert!(a.intersection(&b).is_subset(&a));
        prop_assert_eq!(a.difference(&b).union(&a.intersection(&b)), a.clone());
    }

    #[test]
    fn random_adversary_stays_in_budget(n in 2usize..60, p in 0.1..=1.0f64, r in 0.0..=1.0f64, s in any::<u64>()) {
        let g = gen_dnp(n, p, s).unwrap();
        let (h, rep) = apply_adversary(&g, &AdversarySpec::random_budgeted(r, s ^ 1)).unwrap();
        prop_assert!(verify_budget(&g, &rep.deleted, r).unwrap());
        prop_assert_eq!(h.arc_count() + rep.deleted.len(), g.arc_count());
        for v in g.vertices() {
            let lost_out = g.out_degree(v) - h.out_degree(v);
            let lost_in = g.in_degree(v) - h.in_degree(v);
            prop_assert!(lost_out as f64 <= r * g.out_degree(v) as f64 + 1e-9);
            prop_assert!(lost_in as f64 <= r * g.in_degree(v) as f64 + 1e-9);
        }
    }

    #[test]
    fn oneway_cut_removes_exactly_b_to_a(g in digraph(30), frac in 0.0..=1.0f64) {
        let n = g.n();
        let a = (frac * n as f64) as usize;
        let cut = (0..a as u32).map(VertexId).collect();
        let (h, _) = apply_adversary(&g, &AdversarySpec::oneway_cut(cut)).unwrap();
        for (u, v) in g.arcs() {
            let crossing = u.index() >= a && v.index() < a;
            prop_assert_eq!(h.has_arc(u, v), !crossing);
        }
    }

    #[test]
    fn matching_is_maximum(l in 1usize..=8, r in 1usize..=8, p in 0.0..=1.0f64, s in any::<u64>()) {
        let full = gen_dnp(l + r, p, s).unwrap();
        let g = full.filter_arcs(|u, v| u.index() < l && v.index() >= l);
        let inst = BipartiteInstance::new(
            &g,
            VertexSet::from_indices(l + r, 0..l),
            VertexSet::from_indices(l + r, l..l + r),
            Sign::Plus,
        ).unwrap();
        let m = max_bipartite_matching(&inst);
        prop_assert!(m.verify(&g, Sign::Plus));
        prop_assert_eq!(m.len(), brute_matching(&inst).unwrap());
    }

    #[test]
    fn held_karp_cycles_verify(g in digraph(8)) {
        let hk = held_karp_hamiltonian(&g).unwrap();
        prop_assert_eq!(hk.is_some(), permutation_hamiltonian(&g).unwrap());
        if let Some(c) = hk {
            prop_assert!(verify_hamilton_cycle(&g, &c));
        }
    }

    #[test]
    fn cycle_hash_ignores_rotation(n in 2usize..30, shift in 0usize..30) {
        let c: Vec<VertexId> = (0..n as u32).rev().map(VertexId).collect();
        let mut rot = c.clone();
        rot.rotate_left(shift % n);
        prop_assert_eq!(cycle_hash(&c), cycle_hash(&rot));
    }

    #[test]
    fn p1_matches_recount(g in digraph(30), alpha in 0.01..0.25f64, p in 0.05..=1.0f64) {
        let n = g.n();
        let params = PseudoParams::new(n, alpha, p).unwrap();
        let min = g.vertices().map(|v| g.out_degree(v).min(g.in_degree(v))).min().unwrap();
        let need = (0.5 + 2.0 * alpha) * n as f64 * p;
        let v = check_p1(&g, &params).unwrap();
        // the checker allows a relative 1e-9 of floating-point slack
        if (min as f64) >= need {
            prop_assert!(v.passed());
        }
        if (min as f64) < need * (1.0 - 1e-6) {
            prop_assert!(!v.passed());
        }
    }

    #[test]
    fn returned_partitions_recount(n in 20usize..120, p in 0.3..=1.0f64, s in any::<u64>(), k in 2usize..5) {
        let g = gen_dnp(n, p, s).unwrap();
        let size = n / (k + 1);
        prop_assume!(size >= 1);
        let req = PartitionRequest {
            universe: VertexSet::full(n),
            sizes: vec![size; k],
            c: 0.3,
            eps: 0.3,
            p,
            degree_vertices: VertexSet::full(n),
            retry_budget: 20,
            min_size: 1,
        };
        match random_partition_with_degrees(&g, &req, s) {
            Ok(parts) => {
                let mut seen = BTreeSet::new();
                for (i, part) in parts.iter().enumerate() {
                    prop_assert_eq!(part.len(), size);
                    let need = 0.7 * 0.3 * p * size as f64;
                    for v in g.vertices() {
                        let d = g.degree_into(v, Sign::Plus, part).min(g.degree_into(v, Sign::Minus, part));
                        prop_assert!(d as f64 >= need, "vertex {} part {}", v, i);
                    }
                    for v in part.iter() {
                        prop_assert!(seen.insert(v));
                    }
                }
            }
            Err(Error::BudgetExhausted { .. } | Error::HypothesisViolated { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn x1_grows_to_all_pairs(t in 1usize..200) {
        let m = (t as f64).log2().ceil() as usize + 1;
        prop_assert_eq!(x1_expected(t, 0, m), 0);
        prop_assert_eq!(x1_expected(t, m, m), t);
        for s in 1..=m {
            prop_assert!(x1_expected(t, s, m) >= x1_expected(t, s - 1, m));
        }
    }

    #[test]
    fn templates_are_cycles(k in 1usize..=24) {
        let t = absorber_template(k).unwrap();
        prop_assert_eq!(t.arcs.len(), 4 * k + 3);
        prop_assert_eq!(t.labels.len(), 4 * k + 3);
        prop_assert_eq!(absorber_sigma(k).unwrap().len(), 4 * k + 3);
        prop_assert_eq!(t.cycle_order().len(), 4 * k + 4);
    }

    #[test]
    fn merged_components_follow_arcs(n in 4usize..80, p in 0.05..=1.0f64, s in any::<u64>(), blocks in 1usize..30) {
        let g = gen_dnp(n, p, s).unwrap();
        let m = blocks.min(n);
        let bl: Vec<Vec<VertexId>> = (0..m).map(|i| vec![VertexId(i as u32)]).collect();
        let comps = merge_blocks(&g, &bl, &mut rng::rng_from(s));
        let mut all: Vec<usize> = comps.iter().flat_map(|c| c.blocks.clone()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m).collect::<Vec<_>>());
        for c in &comps {
            let seq = flatten(&bl, c, 0);
            prop_assert!(seq.windows(2).all(|w| g.has_arc(w[0], w[1])));
            if c.cyclic {
                prop_assert!(g.has_arc(*seq.last().unwrap(), seq[0]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A greedy connection of one pair is one of the enumerated σ-walks.
    #[test]
    fn single_connection_is_enumerated(n in 6usize..20, p in 0.3..=1.0f64, s in pattern(4), seed in any::<u64>()) {
        let g = gen_dnp(n, p, seed).unwrap();
        let (a, b) = (VertexId(0), VertexId(1));
        let k = VertexSet::from_indices(n, 2..n);
        let req = ConnectRequest::new(vec![(a, b)], k, s.clone());
        let scale = ScaleConfig { strategy: ConnectStrategy::Greedy, ..ScaleConfig::default() };
        let all: Vec<Walk> = enumerate_sigma_walks(&g, a, b, &s).unwrap();
        if let Ok(out) = connect_all(&g, &req, &scale, seed) {
            prop_assert!(all.contains(&out.walks[0]));
        }
    }

    /// Emitted cycles always verify, and the run is a function of its seed.
    #[test]
    fn engine_is_sound_and_seeded(n in 5usize..40, p in 0.3..=1.0f64, seed in any::<u64>()) {
        let g = gen_dnp(n, p, seed).unwrap();
        let pp = PseudoParams::new(n, 0.05, g.density().max(1.0 / n as f64)).unwrap();
        let scale = ScaleConfig::permissive();
        let a = find_hamilton_cycle(&g, &pp, &scale, seed);
        let b = find_hamilton_cycle(&g, &pp, &scale, seed);
        if let Some(c) = &a.cycle {
            prop_assert!(verify_hamilton_cycle(&g, c));
        }
        prop_assert_eq!(a.cycle, b.cycle);
        prop_assert_eq!(a.failure, b.failure);
    }
}
