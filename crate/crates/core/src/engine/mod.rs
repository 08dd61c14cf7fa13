//! The whole construction as one Las Vegas run: split `V` into five parts,
//! build absorbers and the backbone, cover the rest by paths, close the paths
//! into a cycle through `V_1`, absorb what is left of `V_1`, verify.

mod cover;
mod merge;

pub use cover::{audit_cover, path_cover, PathCover};
pub use merge::{flatten, merge_blocks, Component};

use crate::absorber::{absorb, build_absorbers, build_backbone, validate_absorber, AbsorbingStructure};
use crate::connector::{connect_all, ConnectRequest};
use crate::digraph::{verify_hamilton_cycle, Digraph, SignPattern, VertexId, VertexSet, Walk};
use crate::error::{Error, Result};
use crate::partition::partition_v1_v5;
use crate::pseudorandom::{check_p1, q1_violations, PseudoParams};
use crate::rng;
use crate::scale::{ResolvedScale, ScaleConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Input,
    P1,
    Scale,
    Partition,
    Absorbers,
    Backbone,
    PathCover,
    FinalConnect,
    Absorb,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub kind: String,
    pub message: String,
}

impl StageFailure {
    fn new(stage: Stage, e: &Error) -> Self {
        StageFailure { stage, kind: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Cycle,
    Failure,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryCounts {
    pub pipeline: usize,
    pub segments: usize,
    pub final_connect: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub absorbers: usize,
    pub backbone_vertices: usize,
    pub cover_paths: usize,
    pub cover_segments: usize,
    pub cover_singletons: usize,
    pub components: usize,
    pub final_pairs: usize,
    pub final_len: usize,
    pub absorbed: usize,
    pub q1_violations: usize,
}

/// Which reservoir each kind of connector walk drew from, rechecked after
/// the run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservoirAudit {
    pub cycles_in_v2: bool,
    pub chords_in_v3: bool,
    pub links_in_v4: bool,
    pub final_in_v1: bool,
    /// `V_2 ∪ V_3 ∪ V_4 ∪ V_5 ⊆ V(C)` before absorption.
    pub middle_covered: bool,
}

impl ReservoirAudit {
    pub fn all_ok(&self) -> bool {
        self.cycles_in_v2 && self.chords_in_v3 && self.links_in_v4 && self.final_in_v1 && self.middle_covered
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub outcome: Outcome,
    pub failure: Option<StageFailure>,
    pub cycle: Option<Vec<VertexId>>,
    pub seed: u64,
    pub n: usize,
    pub params: PseudoParams,
    pub scale: ScaleConfig,
    pub resolved: Option<ResolvedScale>,
    pub retries: RetryCounts,
    pub stats: RunStats,
    pub audit: Option<ReservoirAudit>,
    /// Hypotheses that failed and were only recorded.
    pub notes: Vec<String>,
    /// Milliseconds per stage of the last attempt.
    pub stage_timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Cycle
    }

    /// The cycle as one line of space-separated vertex ids.
    pub fn cycle_line(&self) -> Option<String> {
        self.cycle.as_ref().map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
    }
}

struct Attempt {
    stats: RunStats,
    notes: Vec<String>,
    timings: BTreeMap<String, f64>,
    retries: RetryCounts,
    clock: Instant,
}

impl Attempt {
    fn lap(&mut self, stage: Stage) {
        let now = Instant::now();
        self.timings.insert(stage.to_string(), (now - self.clock).as_secs_f64() * 1e3);
        self.clock = now;
    }
}

type StageResult<T> = std::result::Result<T, StageFailure>;

fn at<T>(stage: Stage, r: Result<T>) -> StageResult<T> {
    r.map_err(|e| StageFailure::new(stage, &e))
}

fn union(parts: &[&VertexSet]) -> VertexSet {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out.union_with(p);
    }
    out
}

fn interiors_within<'a>(walks: impl IntoIterator<Item = &'a Walk>, set: &VertexSet) -> bool {
    walks.into_iter().all(|w| w.interior().iter().all(|&v| set.contains(v)))
}

/// Runs the pipeline up to `scale.pipeline_restarts + 1` times with derived
/// seeds. A returned cycle has always passed [`verify_hamilton_cycle`].
pub fn find_hamilton_cycle(g: &Digraph, params: &PseudoParams, scale: &ScaleConfig, seed: u64) -> RunReport {
    let mut report = RunReport {
        outcome: Outcome::Failure,
        failure: None,
        cycle: None,
        seed,
        n: g.n(),
        params: *params,
        scale: scale.clone(),
        resolved: None,
        retries: RetryCounts::default(),
        stats: RunStats::default(),
        audit: None,
        notes: Vec::new(),
        stage_timings: BTreeMap::new(),
    };
    let fail = |mut r: RunReport, f: StageFailure| {
        r.failure = Some(f);
        r
    };
    if params.n != g.n() {
        let e = Error::InvalidParam(format!("params are for n = {}, digraph has {}", params.n, g.n()));
        return fail(report, StageFailure::new(Stage::Input, &e));
    }
    if let Err(e) = params.validate().and_then(|_| scale.validate()) {
        return fail(report, StageFailure::new(Stage::Input, &e));
    }
    match check_p1(g, params) {
        Ok(v) if v.passed() => {}
        Ok(v) => {
            let e = Error::HypothesisViolated {
                reason: format!("minimum semi-degree below {:.2}: {:?}", params.p1_threshold(), v.witness),
                witness: None,
            };
            return fail(report, StageFailure::new(Stage::P1, &e));
        }
        Err(e) => return fail(report, StageFailure::new(Stage::P1, &e)),
    }
    let resolved = match scale.resolve(params) {
        Ok(r) => r,
        Err(e) => return fail(report, StageFailure::new(Stage::Scale, &e)),
    };
    report.resolved = Some(resolved.clone());

    let mut last_failure = None;
    for attempt in 0..=scale.pipeline_restarts {
        let mut st = Attempt {
            stats: RunStats::default(),
            notes: Vec::new(),
            timings: BTreeMap::new(),
            retries: RetryCounts { pipeline: attempt, ..RetryCounts::default() },
            clock: Instant::now(),
        };
        let outcome = run_once(g, params, scale, &resolved, rng::derive_seed(seed, attempt as u64), &mut st);
        report.stats = st.stats;
        report.notes = st.notes;
        report.stage_timings = st.timings;
        report.retries = st.retries;
        match outcome {
            Ok((cycle, audit)) => {
                report.outcome = Outcome::Cycle;
                report.cycle = Some(cycle);
                report.audit = Some(audit);
                report.failure = None;
                return report;
            }
            Err(f) => last_failure = Some(f),
        }
    }
    report.failure = last_failure;
    report
}

fn run_once(
    g: &Digraph,
    params: &PseudoParams,
    scale: &ScaleConfig,
    resolved: &ResolvedScale,
    seed: u64,
    st: &mut Attempt,
) -> StageResult<(Vec<VertexId>, ReservoirAudit)> {
    let n = g.n();
    let mut rng = rng::stream(seed, 0);

    let parts = match partition_v1_v5(g, params, scale, rng::derive_seed(seed, 10)) {
        Ok(p) => p,
        Err(Error::BudgetExhausted { best_attempt: Some(best), worst_violator, attempts, .. }) if !scale.strict => {
            st.notes.push(format!(
                "partition: no verified split in {attempts} attempts, using the best one (worst violator {:?})",
                worst_violator.map(|w| w.to_string())
            ));
            *best
        }
        Err(e) => return Err(StageFailure::new(Stage::Partition, &e)),
    };
    let (v1, v2, v3, v4, v5) = (&parts[0], &parts[1], &parts[2], &parts[3], &parts[4]);
    st.stats.q1_violations = q1_violations(g, &parts, params).len();
    st.lap(Stage::Partition);

    let (absorbers, notes) =
        at(Stage::Absorbers, build_absorbers(g, v1, v2, v3, Some(params), scale, rng::derive_seed(seed, 20)))?;
    st.notes.extend(notes.warnings);
    if let Some(a) = absorbers.iter().find(|a| !validate_absorber(g, a)) {
        let e = Error::InvalidParam(format!("absorber for {} fails validation", a.x));
        return Err(StageFailure::new(Stage::Absorbers, &e));
    }
    st.stats.absorbers = absorbers.len();
    st.lap(Stage::Absorbers);

    let (structure, notes) =
        at(Stage::Backbone, build_backbone(g, absorbers, v4, Some(params), scale, rng::derive_seed(seed, 30)))?;
    st.notes.extend(notes.warnings);
    let pstar = structure.backbone();
    st.stats.backbone_vertices = pstar.len();
    st.lap(Stage::Backbone);

    let mut u = union(&[v2, v3, v4, v5]);
    for &v in &pstar {
        u.remove(v);
    }
    let cover = at(Stage::PathCover, path_cover(g, &u, params, scale, rng::derive_seed(seed, 40)))?;
    st.notes.extend(cover.warnings.iter().map(|w| format!("path cover: {w}")));
    st.retries.segments = cover.retries;
    st.stats.cover_paths = cover.paths.len();
    st.stats.cover_segments = cover.segments;
    st.stats.cover_singletons = cover.singletons;
    st.lap(Stage::PathCover);

    let mut blocks = cover.paths;
    blocks.push(pstar.clone());
    let components = if scale.merge_paths {
        merge_blocks(g, &blocks, &mut rng)
    } else {
        (0..blocks.len()).map(|i| Component { blocks: vec![i], cyclic: false }).collect()
    };
    st.stats.components = components.len();

    let (cycle_pre, final_walks) = final_connection(g, params, scale, resolved, v1, &blocks, &components, seed, st)?;
    st.lap(Stage::FinalConnect);

    // V_1 minus the final interiors, read off the walks
    let mut leftover = v1.clone();
    for w in &final_walks {
        for &v in w.interior() {
            leftover.remove(v);
        }
    }
    st.stats.absorbed = leftover.len();
    let absorbed = at(Stage::Absorb, absorb(&structure, &leftover))?;
    let cycle = at(Stage::Absorb, splice(&cycle_pre, &pstar, &absorbed.vertices))?;
    st.lap(Stage::Absorb);

    let audit = audit(&structure, &final_walks, &cycle_pre, n, [v1, v2, v3, v4, v5]);
    if !verify_hamilton_cycle(g, &cycle) {
        let e = Error::InvalidParam("assembled cycle fails verification".into());
        return Err(StageFailure::new(Stage::Verify, &e));
    }
    st.lap(Stage::Verify);
    Ok((cycle, audit))
}

#[allow(clippy::too_many_arguments)]
fn final_connection(
    g: &Digraph,
    params: &PseudoParams,
    scale: &ScaleConfig,
    resolved: &ResolvedScale,
    v1: &VertexSet,
    blocks: &[Vec<VertexId>],
    components: &[Component],
    seed: u64,
    st: &mut Attempt,
) -> StageResult<(Vec<VertexId>, Vec<Walk>)> {
    let q = components.len();
    st.stats.final_pairs = q;
    let want_t = 4.0 * params.log_n().powi(2) / params.p;
    if (q as f64) < want_t {
        st.notes.push(format!("final connection has {q} pairs, fewer than 4 ln^2 n / p = {want_t:.1}"));
    }
    let mut rng = rng::stream(seed, 50);
    let mut last = None;
    for attempt in 0..scale.final_attempts.max(1) {
        st.retries.final_connect = attempt;
        let len = resolved.final_len + attempt % (scale.final_length_spread + 1);
        st.stats.final_len = len;
        let mut order: Vec<usize> = (0..q).collect();
        order.shuffle(&mut rng);
        let paths: Vec<Vec<VertexId>> = order
            .iter()
            .map(|&c| {
                let offset = rng.gen_range(0..components[c].blocks.len().max(1));
                flatten(blocks, &components[c], offset)
            })
            .collect();
        let pairs: Vec<(VertexId, VertexId)> =
            (0..q).map(|i| (*paths[i].last().expect("non-empty"), paths[(i + 1) % q][0])).collect();
        let req = ConnectRequest::new(pairs, v1.clone(), SignPattern::all_plus(len)).with_hypothesis(*params);
        match connect_all(g, &req, scale, rng::derive_seed(seed, 60 + attempt as u64)) {
            Ok(out) => {
                let mut cycle = Vec::with_capacity(g.n());
                for (p, w) in paths.iter().zip(&out.walks) {
                    cycle.extend_from_slice(p);
                    cycle.extend_from_slice(w.interior());
                }
                return Ok((cycle, out.walks));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(StageFailure::new(Stage::FinalConnect, &last.expect("at least one attempt")))
}

/// Replaces the contiguous occurrence of `old` in `cycle` by `new`; both
/// must share their endpoints.
fn splice(cycle: &[VertexId], old: &[VertexId], new: &[VertexId]) -> Result<Vec<VertexId>> {
    let bad = || Error::InvalidParam("backbone is not a contiguous piece of the cycle".into());
    let first = *old.first().ok_or_else(bad)?;
    let at = cycle.iter().position(|&v| v == first).ok_or_else(bad)?;
    if at + old.len() > cycle.len() || cycle[at..at + old.len()] != *old {
        return Err(bad());
    }
    let mut out = cycle[..at].to_vec();
    out.extend_from_slice(new);
    out.extend_from_slice(&cycle[at + old.len()..]);
    Ok(out)
}

fn audit(
    s: &AbsorbingStructure,
    final_walks: &[Walk],
    cycle_pre: &[VertexId],
    n: usize,
    [v1, v2, v3, v4, v5]: [&VertexSet; 5],
) -> ReservoirAudit {
    let cycles_in_v2 = s.absorbers.iter().all(|a| {
        let mut cyc = vec![a.x_s, a.x_t];
        cyc.extend(&a.s);
        cyc.extend(&a.t);
        cyc.iter().all(|&v| v2.contains(v)) && v1.contains(a.x)
    });
    let chords_in_v3 = interiors_within(s.absorbers.iter().flat_map(|a| &a.chords), v3);
    let links_in_v4 = interiors_within(&s.links, v4);
    let final_in_v1 = interiors_within(final_walks, v1);
    let on_cycle = VertexSet::from_vertices(n, cycle_pre.iter().copied());
    let middle_covered = union(&[v2, v3, v4, v5]).is_subset(&on_cycle);
    ReservoirAudit { cycles_in_v2, chords_in_v3, links_in_v4, final_in_v1, middle_covered }
}
