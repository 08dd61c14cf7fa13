//! Bipartite matchings between vertex sets of a host digraph: maximum
//! matchings (Hopcroft-Karp), perfect-matching chains between consecutive
//! segments, and saturating 2-matchings.

use crate::digraph::{Digraph, Sign, VertexId, VertexSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Left and right sides in `host`; `l` may be matched to `r` iff `r ∈ N^dir(l)`.
#[derive(Debug, Clone)]
pub struct BipartiteInstance<'g> {
    pub host: &'g Digraph,
    pub left: VertexSet,
    pub right: VertexSet,
    pub dir: Sign,
}

impl<'g> BipartiteInstance<'g> {
    pub fn new(host: &'g Digraph, left: VertexSet, right: VertexSet, dir: Sign) -> Result<Self> {
        if !left.is_disjoint(&right) {
            return Err(Error::InvalidParam("left and right sides overlap".into()));
        }
        if !left.fits(host.n()) || !right.fits(host.n()) {
            return Err(Error::InvalidParam("instance sides exceed the host".into()));
        }
        Ok(BipartiteInstance { host, left, right, dir })
    }

    /// Left vertices in increasing order with their sorted admissible partners.
    pub fn adjacency(&self) -> (Vec<VertexId>, Vec<Vec<VertexId>>) {
        let left = self.left.to_vec();
        let adj = left
            .iter()
            .map(|&l| {
                self.host.neighbors_dir(l, self.dir).iter().copied().filter(|r| self.right.contains(*r)).collect()
            })
            .collect();
        (left, adj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Distinct endpoints on both sides and every pair realized by an arc along `dir`.
    pub fn verify(&self, g: &Digraph, dir: Sign) -> bool {
        let mut l = VertexSet::new(g.n());
        let mut r = VertexSet::new(g.n());
        self.pairs.iter().all(|&(a, b)| {
            a.index() < g.n() && b.index() < g.n() && l.insert(a) && r.insert(b) && g.has_signed(a, dir, b)
        })
    }

    /// Partner of `l`, if matched.
    pub fn partner(&self, l: VertexId) -> Option<VertexId> {
        self.pairs.iter().find(|p| p.0 == l).map(|p| p.1)
    }
}

/// Each source gets two distinct targets; all targets are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TwoMatching {
    pub assignments: Vec<(VertexId, [VertexId; 2])>,
}

impl TwoMatching {
    pub fn verify(&self, g: &Digraph, dir: Sign) -> bool {
        let mut src = VertexSet::new(g.n());
        let mut tgt = VertexSet::new(g.n());
        self.assignments.iter().all(|&(s, [a, b])| {
            src.insert(s) && tgt.insert(a) && tgt.insert(b) && g.has_signed(s, dir, a) && g.has_signed(s, dir, b)
        })
    }
}

const NIL: usize = usize::MAX;

/// Hopcroft-Karp over index-based adjacency `adj[l] ⊆ [0, n_right)`.
struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    mate_l: Vec<usize>,
    mate_r: Vec<usize>,
    dist: Vec<usize>,
}

impl<'a> HopcroftKarp<'a> {
    fn run(adj: &'a [Vec<usize>], n_right: usize) -> Self {
        let mut hk =
            HopcroftKarp { adj, mate_l: vec![NIL; adj.len()], mate_r: vec![NIL; n_right], dist: vec![0; adj.len()] };
        while hk.bfs() {
            for l in 0..adj.len() {
                if hk.mate_l[l] == NIL {
                    hk.dfs(l);
                }
            }
        }
        hk
    }

    fn bfs(&mut self) -> bool {
        let mut q = VecDeque::new();
        for l in 0..self.adj.len() {
            if self.mate_l[l] == NIL {
                self.dist[l] = 0;
                q.push_back(l);
            } else {
                self.dist[l] = NIL;
            }
        }
        let mut found = false;
        while let Some(l) = q.pop_front() {
            for &r in &self.adj[l] {
                let m = self.mate_r[r];
                if m == NIL {
                    found = true;
                } else if self.dist[m] == NIL {
                    self.dist[m] = self.dist[l] + 1;
                    q.push_back(m);
                }
            }
        }
        found
    }

    fn dfs(&mut self, l: usize) -> bool {
        for i in 0..self.adj[l].len() {
            let r = self.adj[l][i];
            let m = self.mate_r[r];
            if m == NIL || (self.dist[m] == self.dist[l] + 1 && self.dfs(m)) {
                self.mate_l[l] = r;
                self.mate_r[r] = l;
                return true;
            }
        }
        self.dist[l] = NIL;
        false
    }

    fn size(&self) -> usize {
        self.mate_l.iter().filter(|&&r| r != NIL).count()
    }

    /// Left vertices reachable by alternating paths from unmatched left
    /// vertices. For a maximum matching that misses a left vertex, this set
    /// `X` has `|N(X)| = |X| - #unmatched(X) < |X|`.
    fn alternating_reach(&self) -> Vec<usize> {
        let mut seen_l = vec![false; self.adj.len()];
        let mut seen_r = vec![false; self.mate_r.len()];
        let mut q: VecDeque<usize> = (0..self.adj.len()).filter(|&l| self.mate_l[l] == NIL).collect();
        for &l in &q {
            seen_l[l] = true;
        }
        while let Some(l) = q.pop_front() {
            for &r in &self.adj[l] {
                if !seen_r[r] {
                    seen_r[r] = true;
                    let m = self.mate_r[r];
                    if m != NIL && !seen_l[m] {
                        seen_l[m] = true;
                        q.push_back(m);
                    }
                }
            }
        }
        (0..self.adj.len()).filter(|&l| seen_l[l]).collect()
    }
}

/// Maximum matching on index-based adjacency; `mate[l]` is the right
/// partner of `l`.
pub(crate) fn max_matching_indices(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let hk = HopcroftKarp::run(adj, n_right);
    hk.mate_l.iter().map(|&r| (r != NIL).then_some(r)).collect()
}

fn index_adjacency(left_adj: &[Vec<VertexId>], n: usize) -> (Vec<Vec<usize>>, Vec<VertexId>) {
    let mut pos = vec![NIL; n];
    let mut rights = Vec::new();
    let adj = left_adj
        .iter()
        .map(|ns| {
            ns.iter()
                .map(|&r| {
                    if pos[r.index()] == NIL {
                        pos[r.index()] = rights.len();
                        rights.push(r);
                    }
                    pos[r.index()]
                })
                .collect()
        })
        .collect();
    (adj, rights)
}

fn neighborhood_size(g: &Digraph, xs: &[VertexId], dir: Sign, right: &VertexSet) -> usize {
    let mut nb = VertexSet::new(g.n());
    for &x in xs {
        for &w in g.neighbors_dir(x, dir) {
            if right.contains(w) {
                nb.insert(w);
            }
        }
    }
    nb.len()
}

/// Maximum-cardinality matching. Left vertices and their partner lists are
/// scanned in increasing id order, so the result is deterministic.
pub fn max_bipartite_matching(inst: &BipartiteInstance<'_>) -> Matching {
    max_matching_with_witness(inst).0
}

/// Maximum matching plus the alternating-reachability Hall violator (empty
/// when the left side is saturated).
pub fn max_matching_with_witness(inst: &BipartiteInstance<'_>) -> (Matching, Vec<VertexId>) {
    let (left, ladj) = inst.adjacency();
    let (adj, rights) = index_adjacency(&ladj, inst.host.n());
    let hk = HopcroftKarp::run(&adj, rights.len());
    let pairs = (0..left.len()).filter(|&l| hk.mate_l[l] != NIL).map(|l| (left[l], rights[hk.mate_l[l]])).collect();
    let witness =
        if hk.size() < left.len() { hk.alternating_reach().into_iter().map(|l| left[l]).collect() } else { Vec::new() };
    (Matching { pairs }, witness)
}

/// Perfect `+`-matchings from each segment into the next.
pub fn perfect_matching_chain(segments: &[VertexSet], g: &Digraph) -> Result<Vec<Matching>> {
    if let Some(s) = segments.first() {
        if segments.iter().any(|t| t.len() != s.len()) {
            return Err(Error::InvalidParam("segments must have equal sizes".into()));
        }
    }
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if !segments[i].is_disjoint(&segments[j]) {
                return Err(Error::InvalidParam(format!("segments {i} and {j} overlap")));
            }
        }
    }
    let mut out = Vec::with_capacity(segments.len().saturating_sub(1));
    for w in segments.windows(2) {
        let inst = BipartiteInstance::new(g, w[0].clone(), w[1].clone(), Sign::Plus)?;
        let (m, witness) = max_matching_with_witness(&inst);
        if m.len() < w[0].len() {
            let neighborhood = neighborhood_size(g, &witness, Sign::Plus, &w[1]);
            return Err(Error::HallViolation { required: witness.len(), witness, neighborhood });
        }
        out.push(m);
    }
    Ok(out)
}

/// Saturating (2, dir)-matching from `s` into `target`, via the doubled instance.
pub fn two_matching(s: &VertexSet, target: &VertexSet, dir: Sign, g: &Digraph) -> Result<TwoMatching> {
    if !s.is_disjoint(target) {
        return Err(Error::InvalidParam("sources and targets overlap".into()));
    }
    let src = s.to_vec();
    if target.len() < 2 * src.len() {
        let neighborhood = neighborhood_size(g, &src, dir, target);
        return Err(Error::HallViolation { required: 2 * src.len(), witness: src, neighborhood });
    }
    let single: Vec<Vec<VertexId>> = src
        .iter()
        .map(|&x| g.neighbors_dir(x, dir).iter().copied().filter(|w| target.contains(*w)).collect())
        .collect();
    let doubled: Vec<Vec<VertexId>> = single.iter().flat_map(|ns| [ns.clone(), ns.clone()]).collect();
    let (adj, rights) = index_adjacency(&doubled, g.n());
    let hk = HopcroftKarp::run(&adj, rights.len());
    if hk.size() < doubled.len() {
        let mut xs: Vec<VertexId> = hk.alternating_reach().into_iter().map(|c| src[c / 2]).collect();
        xs.dedup();
        let neighborhood = neighborhood_size(g, &xs, dir, target);
        return Err(Error::HallViolation { required: 2 * xs.len(), witness: xs, neighborhood });
    }
    let assignments =
        src.iter().enumerate().map(|(i, &x)| (x, [rights[hk.mate_l[2 * i]], rights[hk.mate_l[2 * i + 1]]])).collect();
    Ok(TwoMatching { assignments })
}
