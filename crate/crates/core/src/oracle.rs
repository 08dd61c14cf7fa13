//! Exhaustive ground truth for small instances.

use crate::digraph::{Digraph, SignPattern, VertexId, Walk};
use crate::error::{Error, Result};
use crate::matching::BipartiteInstance;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimit {
    pub max_n_heldkarp: usize,
    pub max_n_permutation: usize,
    pub max_sigma_len: usize,
    pub max_n_sigma: usize,
    pub max_matching_side: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit {
            max_n_heldkarp: 20,
            max_n_permutation: 9,
            max_sigma_len: 4,
            max_n_sigma: 30,
            max_matching_side: 10,
        }
    }
}

fn out_masks(g: &Digraph) -> Vec<u32> {
    g.vertices().map(|v| g.out_neighbors(v).iter().fold(0u32, |m, w| m | (1 << w.0))).collect()
}

/// Subset DP anchored at vertex 0. Returns a Hamilton cycle when one exists.
/// Digraphs with fewer than two vertices have none.
pub fn held_karp_hamiltonian(g: &Digraph) -> Result<Option<Vec<VertexId>>> {
    held_karp_with_limit(g, OracleLimit::default().max_n_heldkarp)
}

pub fn held_karp_with_limit(g: &Digraph, limit: usize) -> Result<Option<Vec<VertexId>>> {
    let n = g.n();
    if n > limit || n > 24 {
        return Err(Error::GraphTooLarge { n, limit });
    }
    if n < 2 {
        return Ok(None);
    }
    let out = out_masks(g);
    // ends[mask] = set of v such that some path from 0 covers exactly `mask` and ends at v
    let full = (1usize << n) - 1;
    let mut ends = vec![0u32; 1 << n];
    ends[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 {
            continue;
        }
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nx = out[v] & !(mask as u32);
            while nx != 0 {
                let w = nx.trailing_zeros() as usize;
                nx &= nx - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    let closing = (0..n).find(|&v| ends[full] >> v & 1 == 1 && out[v] & 1 == 1 && v != 0);
    let Some(mut v) = closing else { return Ok(None) };
    let mut mask = full;
    let mut rev = vec![VertexId(v as u32)];
    while mask != 1 {
        let prev_mask = mask & !(1 << v);
        let u =
            (0..n).find(|&u| ends[prev_mask] >> u & 1 == 1 && out[u] >> v & 1 == 1).expect("DP table is consistent");
        rev.push(VertexId(u as u32));
        mask = prev_mask;
        v = u;
    }
    rev.reverse();
    Ok(Some(rev))
}

/// Brute force over all orderings with vertex 0 first.
pub fn permutation_hamiltonian(g: &Digraph) -> Result<bool> {
    let n = g.n();
    let limit = OracleLimit::default().max_n_permutation;
    if n > limit {
        return Err(Error::GraphTooLarge { n, limit });
    }
    if n < 2 {
        return Ok(false);
    }
    fn extend(g: &Digraph, path: &mut Vec<VertexId>, used: &mut [bool]) -> bool {
        let n = g.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            return g.has_arc(last, path[0]);
        }
        for w in 1..n {
            if !used[w] && g.has_arc(last, VertexId(w as u32)) {
                used[w] = true;
                path.push(VertexId(w as u32));
                if extend(g, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    Ok(extend(g, &mut vec![VertexId(0)], &mut used))
}

/// Every σ-walk from `a` to `b` with distinct interior vertices avoiding both
/// endpoints (`a == b` gives closed walks).
pub fn enumerate_sigma_walks(g: &Digraph, a: VertexId, b: VertexId, sigma: &SignPattern) -> Result<Vec<Walk>> {
    let lim = OracleLimit::default();
    if g.n() > lim.max_n_sigma {
        return Err(Error::GraphTooLarge { n: g.n(), limit: lim.max_n_sigma });
    }
    if sigma.len() > lim.max_sigma_len {
        return Err(Error::InvalidParam(format!("pattern length {} above {}", sigma.len(), lim.max_sigma_len)));
    }
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let l = sigma.len();
    let mut out = Vec::new();
    let mut path = vec![a];
    fn go(g: &Digraph, b: VertexId, sigma: &SignPattern, path: &mut Vec<VertexId>, out: &mut Vec<Walk>) {
        let i = path.len() - 1;
        let l = sigma.len();
        let cur = path[i];
        for &w in g.neighbors_dir(cur, sigma.at(i)) {
            if i + 1 == l {
                if w == b && (w != path[0] || l >= 2) && !path[1..].contains(&w) {
                    let mut vs = path.clone();
                    vs.push(w);
                    out.push(Walk::new(vs, sigma.clone()));
                }
            } else if w != b && !path.contains(&w) {
                path.push(w);
                go(g, b, sigma, path, out);
                path.pop();
            }
        }
    }
    if l >= 1 {
        go(g, b, sigma, &mut path, &mut out);
    }
    Ok(out)
}

/// Exhaustive maximum matching size.
pub fn brute_matching(inst: &BipartiteInstance<'_>) -> Result<usize> {
    let lim = OracleLimit::default().max_matching_side;
    if inst.left.len() > lim || inst.right.len() > lim {
        return Err(Error::GraphTooLarge { n: inst.left.len().max(inst.right.len()), limit: lim });
    }
    let right = inst.right.to_vec();
    let left = inst.left.to_vec();
    let masks: Vec<u32> = left
        .iter()
        .map(|&l| {
            right
                .iter()
                .enumerate()
                .filter(|(_, &r)| inst.host.has_signed(l, inst.dir, r))
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();
    fn best(i: usize, used: u32, masks: &[u32]) -> usize {
        if i == masks.len() {
            return 0;
        }
        let mut b = best(i + 1, used, masks);
        let mut free = masks[i] & !used;
        while free != 0 {
            let j = free.trailing_zeros();
            free &= free - 1;
            b = b.max(1 + best(i + 1, used | (1 << j), masks));
        }
        b
    }
    Ok(best(0, 0, &masks))
}
