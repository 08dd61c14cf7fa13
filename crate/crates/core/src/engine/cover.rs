use crate::digraph::{Digraph, Sign, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::matching::{max_bipartite_matching, perfect_matching_chain, BipartiteInstance, Matching};
use crate::partition::{partition_path_segments, sample_partition, segment_request, SegmentPartition};
use crate::pseudorandom::PseudoParams;
use crate::rng;
use crate::scale::ScaleConfig;
use serde::{Deserialize, Serialize};

/// Vertex-disjoint directed paths covering `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathCover {
    pub paths: Vec<Vec<VertexId>>,
    pub segments: usize,
    pub singletons: usize,
    /// The segment partition passed its exact degree recount.
    pub verified_partition: bool,
    /// Every matching between consecutive segments was perfect.
    pub perfect: bool,
    pub retries: usize,
    pub warnings: Vec<String>,
}

fn paths_from_matchings(u: &VertexSet, sp: &SegmentPartition, ms: &[Matching]) -> Vec<Vec<VertexId>> {
    let n = u.universe();
    let mut succ = vec![None; n];
    let mut has_pred = VertexSet::new(n);
    for m in ms {
        for &(a, b) in &m.pairs {
            succ[a.index()] = Some(b);
            has_pred.insert(b);
        }
    }
    let mut paths = Vec::new();
    for seg in &sp.segments {
        for v in seg.iter().filter(|&v| !has_pred.contains(v)) {
            let mut p = vec![v];
            let mut at = v;
            while let Some(w) = succ[at.index()] {
                p.push(w);
                at = w;
            }
            paths.push(p);
        }
    }
    paths.extend(sp.leftover.iter().map(|v| vec![v]));
    paths
}

fn max_matching_chain(g: &Digraph, segments: &[VertexSet]) -> Result<Vec<Matching>> {
    segments
        .windows(2)
        .map(|w| Ok(max_bipartite_matching(&BipartiteInstance::new(g, w[0].clone(), w[1].clone(), Sign::Plus)?)))
        .collect()
}

/// Equal segments chained by perfect matchings; leftover vertices become
/// 0-length paths. Outside strict mode an unverified segment split is
/// accepted, and after `segment_retries` Hall failures the chain falls back
/// to maximum matchings, which still yields a cover.
pub fn path_cover(
    g: &Digraph,
    u: &VertexSet,
    params: &PseudoParams,
    scale: &ScaleConfig,
    seed: u64,
) -> Result<PathCover> {
    if !u.fits(g.n()) {
        return Err(Error::InvalidParam("U exceeds the digraph".into()));
    }
    let mut warnings = Vec::new();
    let mut last: Option<(SegmentPartition, bool, Error)> = None;
    let rounds = scale.segment_retries.max(1);
    for r in 0..rounds {
        let rs = rng::derive_seed(seed, r as u64);
        let (sp, verified) = match partition_path_segments(g, u, params, scale, rs) {
            Ok(sp) => (sp, true),
            Err(e @ (Error::BudgetExhausted { .. } | Error::HypothesisViolated { .. })) if !scale.strict => {
                if r == 0 {
                    warnings.push(format!("segment split unverified: {e}"));
                }
                let sp = match e {
                    Error::BudgetExhausted { best_attempt: Some(best), .. } => SegmentPartition::from_parts(u, *best),
                    _ => {
                        let req = segment_request(g, u, params, scale).expect("a request exists when the split failed");
                        SegmentPartition::from_parts(u, sample_partition(u, &req.sizes, &mut rng::stream(rs, 1)))
                    }
                };
                (sp, false)
            }
            Err(e) => return Err(e),
        };
        match perfect_matching_chain(&sp.segments, g) {
            Ok(ms) => {
                let paths = paths_from_matchings(u, &sp, &ms);
                return Ok(PathCover {
                    segments: sp.segments.len(),
                    singletons: sp.leftover.len(),
                    paths,
                    verified_partition: verified,
                    perfect: true,
                    retries: r,
                    warnings,
                });
            }
            Err(e @ Error::HallViolation { .. }) => last = Some((sp, verified, e)),
            Err(e) => return Err(e),
        }
    }
    let (sp, verified, err) = last.expect("at least one round ran");
    if scale.strict {
        return Err(err);
    }
    warnings.push(format!("no perfect matching chain after {rounds} splits ({err}); using maximum matchings"));
    let ms = max_matching_chain(g, &sp.segments)?;
    Ok(PathCover {
        segments: sp.segments.len(),
        singletons: sp.leftover.len(),
        paths: paths_from_matchings(u, &sp, &ms),
        verified_partition: verified,
        perfect: false,
        retries: rounds,
        warnings,
    })
}

/// Disjoint, exhaustive over `U`, and every consecutive pair is an arc.
pub fn audit_cover(g: &Digraph, u: &VertexSet, paths: &[Vec<VertexId>]) -> bool {
    let mut seen = VertexSet::new(g.n());
    for p in paths {
        if p.is_empty() || p.windows(2).any(|w| !g.has_arc(w[0], w[1])) {
            return false;
        }
        for &v in p {
            if !u.contains(v) || !seen.insert(v) {
                return false;
            }
        }
    }
    seen.len() == u.len()
}
