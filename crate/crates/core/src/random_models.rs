//! D(n, p) generation and arc-deleting adversaries with a per-vertex budget.

use crate::digraph::{Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

/// Each of the n(n-1) ordered pairs becomes an arc independently with
/// probability `p`. Pairs are visited in (source, target) order and each
/// consumes one uniform draw, so the output depends only on `(n, p, seed)`.
pub fn gen_dnp(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = rng::rng_from(seed);
    let mut arcs = Vec::with_capacity(((n * n) as f64 * p * 1.1) as usize + 16);
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.gen::<f64>() < p {
                arcs.push((u, v));
            }
        }
    }
    Ok(Digraph::from_sorted_unique(n, &arcs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    RandomBudgeted,
    OnewayCut,
    CustomArcList,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    /// Per-vertex deletion fraction, used by `RandomBudgeted`.
    #[serde(default)]
    pub r: f64,
    /// The set `A` whose incoming arcs from outside are all cut.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_set: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<(VertexId, VertexId)>>,
    #[serde(default)]
    pub seed: u64,
}

impl AdversarySpec {
    pub fn random_budgeted(r: f64, seed: u64) -> Self {
        AdversarySpec { kind: AdversaryKind::RandomBudgeted, r, cut_set: None, arcs: None, seed }
    }

    pub fn oneway_cut(cut_set: Vec<VertexId>) -> Self {
        AdversarySpec { kind: AdversaryKind::OnewayCut, r: 0.0, cut_set: Some(cut_set), arcs: None, seed: 0 }
    }

    pub fn custom(arcs: Vec<(VertexId, VertexId)>) -> Self {
        AdversarySpec { kind: AdversaryKind::CustomArcList, r: 0.0, cut_set: None, arcs: Some(arcs), seed: 0 }
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::InvalidParam(format!("r = {} outside [0, 1]", self.r)));
        }
        match (self.kind, &self.cut_set) {
            (AdversaryKind::OnewayCut, None) => return Err(Error::InvalidParam("oneway-cut needs a cut set".into())),
            (AdversaryKind::OnewayCut, Some(a)) => {
                if let Some(v) = a.iter().find(|v| v.index() >= g.n()) {
                    return Err(Error::InvalidVertex { vertex: v.index(), n: g.n() });
                }
            }
            (_, Some(_)) => return Err(Error::InvalidParam("cut set only applies to oneway-cut".into())),
            _ => {}
        }
        if self.kind == AdversaryKind::CustomArcList && self.arcs.is_none() {
            return Err(Error::InvalidParam("custom adversary needs an arc list".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletionReport {
    pub deleted: Vec<(VertexId, VertexId)>,
    /// Largest fraction of out-arcs removed at any single vertex.
    pub per_vertex_out_frac: f64,
    /// Largest fraction of in-arcs removed at any single vertex.
    pub per_vertex_in_frac: f64,
}

fn max_fractions(g: &Digraph, deleted: &[(VertexId, VertexId)]) -> (f64, f64) {
    let mut od = vec![0usize; g.n()];
    let mut id = vec![0usize; g.n()];
    for &(u, v) in deleted {
        od[u.index()] += 1;
        id[v.index()] += 1;
    }
    let frac = |d: usize, tot: usize| if tot == 0 { 0.0 } else { d as f64 / tot as f64 };
    let mo = g.vertices().map(|v| frac(od[v.index()], g.out_degree(v))).fold(0.0, f64::max);
    let mi = g.vertices().map(|v| frac(id[v.index()], g.in_degree(v))).fold(0.0, f64::max);
    (mo, mi)
}

/// Applies the adversary, returning the surviving digraph and what was removed.
pub fn apply_adversary(g: &Digraph, spec: &AdversarySpec) -> Result<(Digraph, DeletionReport)> {
    spec.validate(g)?;
    let n = g.n();
    let mut gone: Vec<(VertexId, VertexId)> = match spec.kind {
        AdversaryKind::RandomBudgeted => {
            let mut order: Vec<(VertexId, VertexId)> = g.arcs().collect();
            order.shuffle(&mut rng::rng_from(spec.seed));
            let out_cap: Vec<usize> =
                g.vertices().map(|v| (spec.r * g.out_degree(v) as f64).floor() as usize).collect();
            let in_cap: Vec<usize> = g.vertices().map(|v| (spec.r * g.in_degree(v) as f64).floor() as usize).collect();
            let mut od = vec![0usize; n];
            let mut id = vec![0usize; n];
            let mut out = Vec::new();
            for (u, v) in order {
                if od[u.index()] < out_cap[u.index()] && id[v.index()] < in_cap[v.index()] {
                    od[u.index()] += 1;
                    id[v.index()] += 1;
                    out.push((u, v));
                }
            }
            out
        }
        AdversaryKind::OnewayCut => {
            let a = VertexSet::from_vertices(n, spec.cut_set.iter().flatten().copied());
            g.arcs().filter(|&(u, v)| !a.contains(u) && a.contains(v)).collect()
        }
        AdversaryKind::CustomArcList => {
            let arcs = spec.arcs.as_deref().unwrap_or(&[]);
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::with_capacity(arcs.len());
            for &(u, v) in arcs {
                if !g.has_arc(u, v) {
                    return Err(Error::ArcNotPresent(u, v));
                }
                if seen.insert((u, v)) {
                    out.push((u, v));
                }
            }
            out
        }
    };
    gone.sort_unstable();
    let h: std::collections::HashSet<(VertexId, VertexId)> = gone.iter().copied().collect();
    let rest = g.filter_arcs(|u, v| !h.contains(&(u, v)));
    let (mo, mi) = max_fractions(g, &gone);
    Ok((rest, DeletionReport { deleted: gone, per_vertex_out_frac: mo, per_vertex_in_frac: mi }))
}

/// True iff deleting `h_arcs` removes at most an `r` fraction of the out-arcs
/// and of the in-arcs at every vertex.
pub fn verify_budget(g: &Digraph, h_arcs: &[(VertexId, VertexId)], r: f64) -> Result<bool> {
    let mut od = vec![0usize; g.n()];
    let mut id = vec![0usize; g.n()];
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in h_arcs {
        if !g.has_arc(u, v) {
            return Err(Error::ArcNotPresent(u, v));
        }
        if seen.insert((u, v)) {
            od[u.index()] += 1;
            id[v.index()] += 1;
        }
    }
    Ok(g.vertices().all(|v| {
        od[v.index()] as f64 <= r * g.out_degree(v) as f64 && id[v.index()] as f64 <= r * g.in_degree(v) as f64
    }))
}
