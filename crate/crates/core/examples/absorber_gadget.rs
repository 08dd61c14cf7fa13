//! The absorber gadget: its template, its sign pattern, and one embedded
//! copy whose two paths differ by exactly the special vertex.
//!
//!     cargo run --release --example absorber_gadget

use resilient_ham::absorber::{
    absorb, absorber_sigma, absorber_template, absorbing_path, build_absorbers, build_backbone, non_absorbing_path,
    validate_absorber,
};
use resilient_ham::random_models::gen_dnp;
use resilient_ham::scale::ScaleConfig;
use resilient_ham::VertexSet;

fn main() -> resilient_ham::Result<()> {
    for k in 1..=3 {
        let t = absorber_template(k)?;
        println!("k = {k}: {} vertices, {} arcs, sigma {}", t.labels.len(), t.arcs.len(), absorber_sigma(k)?);
    }

    let n = 300;
    let g = gen_dnp(n, 0.3, 5)?;
    let scale = ScaleConfig::default();
    let v1 = VertexSet::from_indices(n, 0..3);
    let v2 = VertexSet::from_indices(n, 3..120);
    let v3 = VertexSet::from_indices(n, 120..220);
    let v4 = VertexSet::from_indices(n, 220..300);
    let (absorbers, notes) = build_absorbers(&g, &v1, &v2, &v3, None, &scale, 1)?;
    for a in &absorbers {
        let (pa, pn) = (absorbing_path(a), non_absorbing_path(a));
        println!(
            "absorber for {}: {} -> {}, paths of {} and {} vertices, valid: {}",
            a.x,
            pa.start(),
            pa.end(),
            pa.vertices.len(),
            pn.vertices.len(),
            validate_absorber(&g, a)
        );
    }
    println!("{}", serde_json::to_string(&absorbers[0].dump())?);

    let (st, _) = build_backbone(&g, absorbers, &v4, None, &scale, 2)?;
    println!("warnings: {:?}", notes.warnings);
    let some = VertexSet::from_indices(n, [0, 2]);
    println!(
        "backbone {} vertices; absorbing {{0, 2}} gives {}",
        st.backbone().len(),
        absorb(&st, &some)?.vertices.len()
    );
    Ok(())
}
