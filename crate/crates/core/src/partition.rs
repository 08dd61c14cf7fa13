//! Degree-preserving random partitions, run as a Las Vegas loop: sample a
//! uniform partition, recount every degree exactly, retry on failure.

use crate::digraph::{Digraph, Sign, VertexId, VertexSet};
use crate::error::{DegreeViolation, Error, Result};
use crate::pseudorandom::{check_p1, PseudoParams};
use crate::rng;
use crate::scale::ScaleConfig;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRequest {
    pub universe: VertexSet,
    pub sizes: Vec<usize>,
    /// Degree constant `c`.
    pub c: f64,
    /// Slack `ε ∈ (0, 1)`.
    pub eps: f64,
    pub p: f64,
    /// Vertices whose degrees must survive the split.
    pub degree_vertices: VertexSet,
    pub retry_budget: usize,
    /// Smallest admissible part size.
    pub min_size: usize,
}

impl PartitionRequest {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.universe.fits(n) || !self.degree_vertices.fits(n) {
            return Err(Error::InvalidParam("request sets exceed the digraph".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidParam("no part sizes given".into()));
        }
        if let Some(s) = self.sizes.iter().find(|&&s| s == 0 || s < self.min_size) {
            return Err(Error::InvalidParam(format!("part size {s} below the minimum {}", self.min_size.max(1))));
        }
        let total: usize = self.sizes.iter().sum();
        if total > self.universe.len() {
            return Err(Error::InvalidParam(format!("sizes sum to {total} > |universe| = {}", self.universe.len())));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) || self.c <= 0.0 || !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidParam("need c > 0, 0 < eps < 1, 0 < p <= 1".into()));
        }
        if self.retry_budget == 0 {
            return Err(Error::InvalidParam("retry budget must be positive".into()));
        }
        Ok(())
    }

    /// Degree each part must receive: `(1 - ε) c p s_i`.
    pub fn part_threshold(&self, i: usize) -> f64 {
        (1.0 - self.eps) * self.c * self.p * self.sizes[i] as f64
    }
}

/// A uniform random choice of disjoint parts with the given sizes.
pub fn sample_partition(universe: &VertexSet, sizes: &[usize], rng: &mut rng::Rng) -> Vec<VertexSet> {
    let mut members = universe.to_vec();
    members.shuffle(rng);
    let n = universe.universe();
    let mut out = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        out.push(VertexSet::from_vertices(n, members[at..at + s].iter().copied()));
        at += s;
    }
    out
}

/// Every `(vertex, part)` whose `deg_pm` falls below the part's threshold,
/// plus the single worst one (largest relative shortfall).
pub fn degree_violations(
    g: &Digraph,
    parts: &[VertexSet],
    vertices: &VertexSet,
    threshold: impl Fn(usize) -> f64,
) -> (usize, Option<DegreeViolation>) {
    let mut part_of = vec![usize::MAX; g.n()];
    for (i, p) in parts.iter().enumerate() {
        for v in p.iter() {
            part_of[v.index()] = i;
        }
    }
    let k = parts.len();
    let thr: Vec<f64> = (0..k).map(&threshold).collect();
    let mut count = 0;
    let mut worst: Option<(f64, DegreeViolation)> = None;
    let mut out_c = vec![0usize; k];
    let mut in_c = vec![0usize; k];
    for v in vertices.iter() {
        out_c.iter_mut().for_each(|c| *c = 0);
        in_c.iter_mut().for_each(|c| *c = 0);
        for &w in g.out_neighbors(v) {
            if let Some(c) = out_c.get_mut(part_of[w.index()]) {
                *c += 1;
            }
        }
        for &w in g.in_neighbors(v) {
            if let Some(c) = in_c.get_mut(part_of[w.index()]) {
                *c += 1;
            }
        }
        for i in 0..k {
            let d = out_c[i].min(in_c[i]);
            if (d as f64) < thr[i] {
                count += 1;
                let gap = (thr[i] - d as f64) / thr[i].max(f64::MIN_POSITIVE);
                if worst.as_ref().is_none_or(|(g0, _)| gap > *g0) {
                    worst = Some((gap, DegreeViolation { vertex: v, part: i, degree: d, required: thr[i] }));
                }
            }
        }
    }
    (count, worst.map(|w| w.1))
}

fn check_hypothesis(g: &Digraph, req: &PartitionRequest) -> Result<()> {
    let need = req.c * req.p * req.universe.len() as f64;
    for v in req.degree_vertices.iter() {
        let d = g.deg_pm_unchecked(v, &req.universe);
        if (d as f64) < need {
            return Err(Error::HypothesisViolated {
                reason: format!("vertex {v} has deg_pm {d} into the universe, needs {need:.3}"),
                witness: Some(DegreeViolation { vertex: v, part: usize::MAX, degree: d, required: need }),
            });
        }
    }
    Ok(())
}

/// Disjoint parts of the requested sizes such that every degree vertex keeps
/// `deg_pm(v, S_i) ≥ (1 - ε) c p s_i`. Every returned partition has been
/// recounted exactly.
pub fn random_partition_with_degrees(g: &Digraph, req: &PartitionRequest, seed: u64) -> Result<Vec<VertexSet>> {
    req.validate(g.n())?;
    check_hypothesis(g, req)?;
    let mut rng = rng::rng_from(seed);
    let mut best: Option<(usize, Vec<VertexSet>, Option<DegreeViolation>)> = None;
    for _ in 0..req.retry_budget {
        let parts = sample_partition(&req.universe, &req.sizes, &mut rng);
        let (bad, worst) = degree_violations(g, &parts, &req.degree_vertices, |i| req.part_threshold(i));
        if bad == 0 {
            return Ok(parts);
        }
        if best.as_ref().is_none_or(|b| bad < b.0) {
            best = Some((bad, parts, worst));
        }
    }
    let (bad, parts, worst) = best.expect("at least one attempt");
    Err(Error::BudgetExhausted {
        attempts: req.retry_budget,
        detail: format!("best attempt still had {bad} degree violations"),
        best_attempt: Some(Box::new(parts)),
        worst_violator: worst,
    })
}

/// The five-part split `V_1, ..., V_5` with sizes from the scale; `V_5` is
/// the remainder and is verified like the others.
pub fn partition_v1_v5(g: &Digraph, params: &PseudoParams, scale: &ScaleConfig, seed: u64) -> Result<Vec<VertexSet>> {
    let p1 = check_p1(g, params)?;
    if !p1.passed() {
        return Err(Error::HypothesisViolated { reason: "minimum semi-degree condition fails".into(), witness: None });
    }
    let resolved = scale.resolve(params)?;
    let req = PartitionRequest {
        universe: VertexSet::full(g.n()),
        sizes: resolved.part_sizes.to_vec(),
        c: 0.5 + 2.0 * params.alpha,
        eps: params.alpha / 3.0,
        p: params.p,
        degree_vertices: VertexSet::full(g.n()),
        retry_budget: scale.partition_retries,
        min_size: 1,
    };
    random_partition_with_degrees(g, &req, seed)
}

/// Equal-size segments of `U` plus the leftover `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentPartition {
    pub segments: Vec<VertexSet>,
    pub leftover: VertexSet,
}

impl SegmentPartition {
    pub fn from_parts(u: &VertexSet, segments: Vec<VertexSet>) -> Self {
        let mut leftover = u.clone();
        for s in &segments {
            leftover.difference_with(s);
        }
        SegmentPartition { segments, leftover }
    }
}

/// Degree constants for the segment split: hypothesis `c = 1/2 + α/2` on `U`,
/// target `(1/2 + α/4) p |S_i|` per segment.
pub fn segment_request(
    g: &Digraph,
    u: &VertexSet,
    params: &PseudoParams,
    scale: &ScaleConfig,
) -> Option<PartitionRequest> {
    let s = scale.segment_size(g.n(), params.p);
    let k = u.len() / s;
    if k == 0 {
        return None;
    }
    let c = 0.5 + params.alpha / 2.0;
    let target = 0.5 + params.alpha / 4.0;
    Some(PartitionRequest {
        universe: u.clone(),
        sizes: vec![s; k],
        c,
        eps: 1.0 - target / c,
        p: params.p,
        degree_vertices: u.clone(),
        retry_budget: scale.partition_retries,
        min_size: 1,
    })
}

pub fn partition_path_segments(
    g: &Digraph,
    u: &VertexSet,
    params: &PseudoParams,
    scale: &ScaleConfig,
    seed: u64,
) -> Result<SegmentPartition> {
    if !u.fits(g.n()) {
        return Err(Error::InvalidParam("U exceeds the digraph".into()));
    }
    match segment_request(g, u, params, scale) {
        None => Ok(SegmentPartition { segments: Vec::new(), leftover: u.clone() }),
        Some(req) => Ok(SegmentPartition::from_parts(u, random_partition_with_degrees(g, &req, seed)?)),
    }
}

/// Convenience for tests and reports: the vertices of `vs` with fewer than
/// `need` arcs in direction `dir` into `within`.
pub fn low_degree_vertices(g: &Digraph, vs: &VertexSet, within: &VertexSet, dir: Sign, need: f64) -> Vec<VertexId> {
    vs.iter().filter(|&v| (g.degree_into(v, dir, within) as f64) < need).collect()
}
