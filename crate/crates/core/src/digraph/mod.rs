//! Simple digraphs (no loops, no parallel arcs) and the counting and walk
//! primitives the rest of the crate is built on.

mod io;
mod set;
mod sigma;
mod sign;
mod walk;

pub use io::{parse_arc_list, parse_edge_list, read_edge_list, write_edge_list, write_edge_list_file};
pub use set::VertexSet;
pub use sigma::{extract_walk, sigma_layers, sigma_neighborhood};
pub use sign::{Sign, SignPattern};
pub use walk::{conforms_to, verify_hamilton_cycle, Walk};

use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Index of a vertex in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    #[inline]
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Above this vertex count arc membership falls back to a hash set.
const BITSET_ARC_LIMIT: usize = 8192;

#[derive(Debug, Clone)]
enum ArcSet {
    Bits(FixedBitSet),
    Hash(HashSet<u64>),
}

/// Immutable simple digraph with CSR adjacency in both directions.
///
/// Neighbor lists are sorted by vertex id, which is what makes every
/// consumer deterministic.
#[derive(Debug, Clone)]
pub struct Digraph {
    n: usize,
    out_off: Vec<usize>,
    out_nbr: Vec<VertexId>,
    in_off: Vec<usize>,
    in_nbr: Vec<VertexId>,
    arcs: ArcSet,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.out_off == other.out_off && self.out_nbr == other.out_nbr
    }
}
impl Eq for Digraph {}

impl Digraph {
    /// Builds a digraph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (u, v) in arcs {
            if u >= n {
                return Err(Error::InvalidVertex { vertex: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidParam(format!("self-loop at vertex {u}")));
            }
            list.push((u as u32, v as u32));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam(format!("duplicate arc {} -> {}", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted_unique(n, &list))
    }

    /// Caller guarantees `list` is sorted, loop-free and duplicate-free.
    pub(crate) fn from_sorted_unique(n: usize, list: &[(u32, u32)]) -> Self {
        let mut out_off = vec![0usize; n + 1];
        let mut in_deg = vec![0usize; n];
        for &(u, v) in list {
            out_off[u as usize + 1] += 1;
            in_deg[v as usize] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
        }
        let out_nbr: Vec<VertexId> = list.iter().map(|&(_, v)| VertexId(v)).collect();

        let mut in_off = vec![0usize; n + 1];
        for i in 0..n {
            in_off[i + 1] = in_off[i] + in_deg[i];
        }
        let mut fill = in_off.clone();
        let mut in_nbr = vec![VertexId(0); list.len()];
        // sources arrive in increasing order, so each in-list ends up sorted
        for &(u, v) in list {
            in_nbr[fill[v as usize]] = VertexId(u);
            fill[v as usize] += 1;
        }

        let arcs = if n <= BITSET_ARC_LIMIT {
            let mut bits = FixedBitSet::with_capacity(n * n);
            for &(u, v) in list {
                bits.insert(u as usize * n + v as usize);
            }
            ArcSet::Bits(bits)
        } else {
            ArcSet::Hash(list.iter().map(|&(u, v)| ((u as u64) << 32) | v as u64).collect())
        };

        Digraph { n, out_off, out_nbr, in_off, in_nbr, arcs }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, &[])
    }

    /// The complete digraph: every ordered pair of distinct vertices.
    pub fn complete(n: usize) -> Self {
        let list: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|u| (0..n as u32).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        Self::from_sorted_unique(n, &list)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.out_nbr.len()
    }

    /// Arc density m / (n(n-1)); zero for n < 2.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.arc_count() as f64 / (self.n as f64 * (self.n as f64 - 1.0))
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n as u32).map(VertexId)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v.index(), n: self.n })
        }
    }

    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        let i = v.index();
        &self.out_nbr[self.out_off[i]..self.out_off[i + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        let i = v.index();
        &self.in_nbr[self.in_off[i]..self.in_off[i + 1]]
    }

    /// `N^+(v)` for `Plus`, `N^-(v)` for `Minus`.
    #[inline]
    pub fn neighbors_dir(&self, v: VertexId, dir: Sign) -> &[VertexId] {
        match dir {
            Sign::Plus => self.out_neighbors(v),
            Sign::Minus => self.in_neighbors(v),
        }
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_off[v.index() + 1] - self.out_off[v.index()]
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_off[v.index() + 1] - self.in_off[v.index()]
    }

    /// O(1) arc membership; false for out-of-range endpoints.
    #[inline]
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        let (ui, vi) = (u.index(), v.index());
        if ui >= self.n || vi >= self.n {
            return false;
        }
        match &self.arcs {
            ArcSet::Bits(b) => b.contains(ui * self.n + vi),
            ArcSet::Hash(h) => h.contains(&(((ui as u64) << 32) | vi as u64)),
        }
    }

    /// True iff `w ∈ N^dir(v)`.
    #[inline]
    pub fn has_signed(&self, v: VertexId, dir: Sign, w: VertexId) -> bool {
        match dir {
            Sign::Plus => self.has_arc(v, w),
            Sign::Minus => self.has_arc(w, v),
        }
    }

    /// All arcs in (source, target) lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.out_nbr[self.out_off[u]..self.out_off[u + 1]].iter().map(move |&v| (VertexId(u as u32), v))
        })
    }

    /// New digraph keeping only the arcs for which `keep` is true.
    pub fn filter_arcs<F: FnMut(VertexId, VertexId) -> bool>(&self, mut keep: F) -> Digraph {
        let list: Vec<(u32, u32)> = self.arcs().filter(|&(u, v)| keep(u, v)).map(|(u, v)| (u.0, v.0)).collect();
        Self::from_sorted_unique(self.n, &list)
    }

    /// `N^dir(v) ∩ within`.
    pub fn neighbors(&self, v: VertexId, dir: Sign, within: &VertexSet) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut out = VertexSet::new(self.n);
        for &w in self.neighbors_dir(v, dir) {
            if within.contains(w) {
                out.insert(w);
            }
        }
        Ok(out)
    }

    /// `|N^dir(v) ∩ within|` without materializing the set.
    #[inline]
    pub fn degree_into(&self, v: VertexId, dir: Sign, within: &VertexSet) -> usize {
        self.neighbors_dir(v, dir).iter().filter(|&&w| within.contains(w)).count()
    }

    /// `min(d^+(v, within), d^-(v, within))`.
    pub fn deg_pm(&self, v: VertexId, within: &VertexSet) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg_pm_unchecked(v, within))
    }

    #[inline]
    pub(crate) fn deg_pm_unchecked(&self, v: VertexId, within: &VertexSet) -> usize {
        self.degree_into(v, Sign::Plus, within).min(self.degree_into(v, Sign::Minus, within))
    }

    /// Minimum semi-degree over the whole vertex set.
    pub fn min_semi_degree(&self) -> usize {
        self.vertices().map(|v| self.out_degree(v).min(self.in_degree(v))).min().unwrap_or(0)
    }

    /// Arcs with both endpoints in `x`.
    pub fn edge_count_within(&self, x: &VertexSet) -> usize {
        self.edge_count_between(x, x)
    }

    /// Arcs from `x` into `y` (the sets may overlap).
    pub fn edge_count_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        x.iter().map(|u| self.degree_into(u, Sign::Plus, y)).sum()
    }
}
