use super::{Digraph, SignPattern, VertexId, VertexSet, Walk};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Layered σ-expansion: `layers[0] = A`, and `layers[i]` holds the vertices of
/// `B` reachable from `layers[i-1]` by one step of sign `sigma.at(i-1)`.
///
/// Walk distinctness is not tracked here; [`extract_walk`] enforces it.
pub fn sigma_layers(g: &Digraph, a: &VertexSet, b: &VertexSet, sigma: &SignPattern) -> Result<Vec<VertexSet>> {
    if sigma.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut layers = Vec::with_capacity(sigma.len() + 1);
    layers.push(a.clone());
    for i in 0..sigma.len() {
        let prev = &layers[i];
        let mut next = VertexSet::new(g.n());
        for u in prev.iter() {
            for &w in g.neighbors_dir(u, sigma.at(i)) {
                if b.contains(w) {
                    next.insert(w);
                }
            }
            if next.len() == b.len() {
                break;
            }
        }
        layers.push(next);
    }
    Ok(layers)
}

/// `N^σ(A, B)`: endpoints in `B` of σ-walks starting in `A` whose non-initial
/// vertices lie in `B`, under the layered relaxation.
pub fn sigma_neighborhood(g: &Digraph, a: &VertexSet, b: &VertexSet, sigma: &SignPattern) -> Result<VertexSet> {
    Ok(sigma_layers(g, a, b, sigma)?.pop().expect("at least two layers"))
}

/// Backtracks from `target` (which must lie in the last layer) to some vertex
/// of `layers[0]`, producing a σ-walk with distinct interior vertices that
/// avoids `avoid`. The start may coincide with `target` (closed walk).
///
/// Candidates at every level are tried in random order; `budget` caps the
/// number of search nodes. Returns `None` when no walk is found in budget.
pub fn extract_walk<R: Rng + ?Sized>(
    g: &Digraph,
    layers: &[VertexSet],
    sigma: &SignPattern,
    target: VertexId,
    avoid: &VertexSet,
    budget: usize,
    rng: &mut R,
) -> Option<Walk> {
    let l = sigma.len();
    if layers.len() != l + 1 || !layers[l].contains(target) {
        return None;
    }
    let mut path = vec![target; l + 1];
    let mut used = VertexSet::new(g.n());
    used.insert(target);
    let mut nodes = 0usize;
    if descend(g, layers, sigma, l, &mut path, &mut used, avoid, &mut nodes, budget, rng) {
        Some(Walk::new(path, sigma.clone()))
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn descend<R: Rng + ?Sized>(
    g: &Digraph,
    layers: &[VertexSet],
    sigma: &SignPattern,
    level: usize,
    path: &mut Vec<VertexId>,
    used: &mut VertexSet,
    avoid: &VertexSet,
    nodes: &mut usize,
    budget: usize,
    rng: &mut R,
) -> bool {
    if level == 0 {
        return true;
    }
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    let cur = path[level];
    // step level-1 goes path[level-1] -> path[level] under sigma.at(level-1)
    let back = sigma.at(level - 1).complement();
    let target = path[path.len() - 1];
    let mut cands: Vec<VertexId> = g
        .neighbors_dir(cur, back)
        .iter()
        .copied()
        .filter(|&u| {
            layers[level - 1].contains(u)
                && !avoid.contains(u)
                && (!used.contains(u) || (level == 1 && u == target && path.len() > 2))
        })
        .collect();
    cands.shuffle(rng);
    for u in cands {
        path[level - 1] = u;
        let fresh = used.insert(u);
        if descend(g, layers, sigma, level - 1, path, used, avoid, nodes, budget, rng) {
            return true;
        }
        if fresh {
            used.remove(u);
        }
        if *nodes > budget {
            return false;
        }
    }
    false
}
