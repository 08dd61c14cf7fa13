use super::Ledger;
use crate::digraph::{sigma_neighborhood, Digraph, Sign, SignPattern, VertexId, VertexSet};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Both one-step neighborhoods of `x` inside `y` reach `(1/2 + α/20)|Y|`.
pub fn big_expansion_holds(g: &Digraph, x: &VertexSet, y: &VertexSet, alpha: f64) -> bool {
    let need = (0.5 + alpha / 20.0) * y.len() as f64;
    [Sign::Plus, Sign::Minus].into_iter().all(|dir| {
        let mut hit = VertexSet::new(g.n());
        for v in x.iter() {
            for &w in g.neighbors_dir(v, dir) {
                if y.contains(w) {
                    hit.insert(w);
                }
            }
        }
        hit.len() as f64 >= need
    })
}

/// Halves the candidate set `X`, keeping a half whose σ-image in `Y` stays
/// above `(1/2 + γ/2)|Y|`, until a single vertex is left.
pub fn expand_to_majority<R: Rng + ?Sized>(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    sigma: &SignPattern,
    ledger: &Ledger,
    gamma: f64,
    rng: &mut R,
) -> Result<(VertexId, VertexSet)> {
    if sigma.len() < 2 {
        return Err(Error::InvalidParam("pattern must have length at least 2".into()));
    }
    if !x.is_disjoint(y) {
        return Err(Error::InvalidParam("X and Y must be disjoint".into()));
    }
    let n = g.n();
    let yy = ledger.available(y);
    let need = (0.5 + gamma / 2.0) * yy.len() as f64;
    let threshold = need.ceil() as usize;
    let image = |set: &[VertexId]| sigma_neighborhood(g, &VertexSet::from_vertices(n, set.iter().copied()), &yy, sigma);
    let mut cand = x.to_vec();
    let mut cur = image(&cand)?;
    let mut level = 1;
    if cand.is_empty() || (cur.len() as f64) < need {
        return Err(Error::ExpansionFailed { level, frontier: cur.len(), threshold });
    }
    while cand.len() > 1 {
        level += 1;
        cand.shuffle(rng);
        let (h1, h2) = cand.split_at(cand.len().div_ceil(2));
        let (i1, i2) = (image(h1)?, image(h2)?);
        let (keep, img) = if i1.len() >= i2.len() { (h1.to_vec(), i1) } else { (h2.to_vec(), i2) };
        if (img.len() as f64) < need {
            return Err(Error::ExpansionFailed { level, frontier: img.len(), threshold });
        }
        cand = keep;
        cur = img;
    }
    Ok((cand[0], cur))
}
