//! Sample D(n,p), attack it two ways, and audit what the adversaries did.
//!
//!     cargo run --release --example generate_and_attack

use resilient_ham::digraph::{parse_edge_list, write_edge_list};
use resilient_ham::random_models::{apply_adversary, gen_dnp, verify_budget, AdversarySpec};
use resilient_ham::{VertexId, VertexSet};

fn main() -> resilient_ham::Result<()> {
    let (n, p) = (400, 0.1);
    let g = gen_dnp(n, p, 42)?;
    println!(
        "D({n}, {p}): {} arcs (mean {:.0}), min semi-degree {}",
        g.arc_count(),
        (n * (n - 1)) as f64 * p,
        g.min_semi_degree()
    );

    // the text format round-trips
    assert_eq!(parse_edge_list(&write_edge_list(&g))?, g);

    for r in [0.0, 0.25, 0.45] {
        let (h, rep) = apply_adversary(&g, &AdversarySpec::random_budgeted(r, 7))?;
        println!(
            "r = {r:.2}: deleted {:>5}, worst out/in share {:.3}/{:.3}, budget ok: {}, min semi-degree left {}",
            rep.deleted.len(),
            rep.per_vertex_out_frac,
            rep.per_vertex_in_frac,
            verify_budget(&g, &rep.deleted, r)?,
            h.min_semi_degree()
        );
    }

    // one-way cut: nothing enters A from outside, so no Hamilton cycle survives
    let a: Vec<VertexId> = (0..n as u32 / 2).map(VertexId).collect();
    let (h, rep) = apply_adversary(&g, &AdversarySpec::oneway_cut(a.clone()))?;
    let a = VertexSet::from_vertices(n, a);
    let b = VertexSet::full(n).difference(&a);
    println!(
        "one-way cut: deleted {} arcs, B->A arcs left {}, A->B arcs left {}, worst in-share {:.3}",
        rep.deleted.len(),
        h.edge_count_between(&b, &a),
        h.edge_count_between(&a, &b),
        rep.per_vertex_in_frac
    );
    Ok(())
}
