//! Tree-doubling connection. Each round connects half of the still open
//! pairs through the reservoirs `R_A`, `R_B` using the leaves of σ-trees
//! grown from both endpoints, then doubles the leaves of the remaining trees
//! with (2, ±)-matchings into the next level sets.

use super::{back_sign, connect_some, ConnectRequest, Ledger, SearchBudget, SigmaTree};
use crate::digraph::{conforms_to, Digraph, SignPattern, VertexId, VertexSet, Walk};
use crate::error::{Error, Result};
use crate::matching::two_matching;
use crate::partition::{random_partition_with_degrees, sample_partition, PartitionRequest};
use crate::pseudorandom::guarded_ln;
use crate::rng;
use crate::scale::ScaleConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingPlan {
    /// Rounds `m = ⌈log₂ t⌉ + 1`.
    pub rounds: usize,
    /// Level set size `h`.
    pub level_size: usize,
    /// Size of each of `R_A`, `R_B`.
    pub reservoir_half: usize,
}

fn ceil_log2(t: usize) -> usize {
    if t <= 1 {
        0
    } else {
        (usize::BITS - (t - 1).leading_zeros()) as usize
    }
}

/// Sizes for `t` pairs, pattern length `l` and reservoir size `k`.
pub fn doubling_plan(n: usize, t: usize, l: usize, k: usize, p: f64, scale: &ScaleConfig) -> Result<DoublingPlan> {
    let rounds = ceil_log2(t.max(1)) + 1;
    if l < 2 * rounds + 1 {
        return Err(Error::HypothesisViolated {
            reason: format!("pattern length {l} below 2m + 1 = {}", 2 * rounds + 1),
            witness: None,
        });
    }
    let dense = (scale.h_mult * 6.0 * guarded_ln(n).powf(2.2) / p.max(f64::MIN_POSITIVE)).ceil().min(1e12) as usize;
    let level_size = scale.h_floor.max(2 * t).max(dense);
    let reservoir_half = k / 4;
    let need = 2 * rounds * level_size + 2 * reservoir_half;
    if need > k {
        return Err(Error::HypothesisViolated {
            reason: format!("2mh + |K|/2 = {need} exceeds |K| = {k} (m = {rounds}, h = {level_size})"),
            witness: None,
        });
    }
    Ok(DoublingPlan { rounds, level_size, reservoir_half })
}

/// `|I_s|` demanded after `s` rounds.
pub fn x1_expected(t: usize, s: usize, m: usize) -> usize {
    if s >= m {
        t
    } else {
        t - t.div_ceil(1 << s)
    }
}

/// One line per round: state index, `|I_s|`, `|P_s|`, free reservoir.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub connected: usize,
    pub walks: usize,
    pub reservoir_remaining: usize,
}

impl fmt::Display for RoundTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round={} connected={} walks={} reservoir_remaining={}",
            self.round, self.connected, self.walks, self.reservoir_remaining
        )
    }
}

#[derive(Debug, Clone)]
pub struct DoublingState {
    pub step: usize,
    pub t: usize,
    pub plan: DoublingPlan,
    /// `walks[i]` is set once pair `i` is connected.
    pub walks: Vec<Option<Walk>>,
    pub trees_a: Vec<SigmaTree>,
    pub trees_b: Vec<SigmaTree>,
    pub levels_a: Vec<VertexSet>,
    pub levels_b: Vec<VertexSet>,
    pub r_a: VertexSet,
    pub r_b: VertexSet,
    pub ledger: Ledger,
}

impl DoublingState {
    pub fn connected(&self) -> Vec<usize> {
        (0..self.t).filter(|&i| self.walks[i].is_some()).collect()
    }

    fn uncovered(&self) -> Vec<usize> {
        (0..self.t).filter(|&i| self.walks[i].is_none()).collect()
    }

    pub fn reservoir_remaining(&self) -> usize {
        self.ledger.available(&self.r_a).len() + self.ledger.available(&self.r_b).len()
    }

    /// X1, X3(a), X4 and X5 for the current step.
    pub fn check_invariants(&self, g: &Digraph, sigma: &SignPattern) -> std::result::Result<(), String> {
        let n = g.n();
        let s = self.step;
        let got = self.connected().len();
        let want = x1_expected(self.t, s, self.plan.rounds);
        if got != want {
            return Err(format!("X1: |I_{s}| = {got}, expected {want}"));
        }
        let back = sigma.reverse_complement();
        let mut seen = VertexSet::new(n);
        let mut walk_vertices = VertexSet::new(n);
        for w in self.walks.iter().flatten() {
            for &v in &w.vertices {
                walk_vertices.insert(v);
            }
        }
        for i in self.uncovered() {
            for (tree, level, pat) in
                [(&self.trees_a[i], &self.levels_a, sigma), (&self.trees_b[i], &self.levels_b, &back)]
            {
                if tree.leaf_count() != 1 << s || tree.depth != s {
                    return Err(format!("X3: tree of pair {i} has {} leaves at step {s}", tree.leaf_count()));
                }
                if !tree.leaf_vertices().iter().all(|&v| level[s].contains(v)) {
                    return Err(format!("X3: leaves of pair {i} outside level {s}"));
                }
                if !tree.conforms(g, pat) {
                    return Err(format!("tree of pair {i} does not follow the pattern"));
                }
                for v in tree.vertices().skip(1) {
                    if !seen.insert(v) {
                        return Err(format!("X4: trees share {v}"));
                    }
                    if walk_vertices.contains(v) {
                        return Err(format!("X5: tree vertex {v} lies on a walk"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn start_state(
    g: &Digraph,
    req: &ConnectRequest,
    plan: DoublingPlan,
    scale: &ScaleConfig,
    seed: u64,
    warnings: &mut Vec<String>,
) -> Result<DoublingState> {
    let n = g.n();
    let t = req.t();
    let m = plan.rounds;
    let mut sizes = vec![plan.level_size; 2 * m];
    sizes.extend([plan.reservoir_half, plan.reservoir_half]);
    let parts = match req.hypothesis {
        Some(pp) => {
            let preq = PartitionRequest {
                universe: req.reservoir.clone(),
                sizes: sizes.clone(),
                c: 0.5 + pp.alpha,
                eps: pp.alpha / (1.0 + 2.0 * pp.alpha),
                p: pp.p,
                degree_vertices: req.endpoints(n),
                retry_budget: scale.partition_retries,
                min_size: 1,
            };
            match random_partition_with_degrees(g, &preq, seed) {
                Ok(parts) => parts,
                Err(e @ (Error::HypothesisViolated { .. } | Error::BudgetExhausted { .. })) => {
                    if scale.strict {
                        return Err(e);
                    }
                    warnings.push(format!("level partition unverified: {}", e.kind()));
                    match e {
                        Error::BudgetExhausted { best_attempt: Some(best), .. } => *best,
                        _ => sample_partition(&req.reservoir, &sizes, &mut rng::stream(seed, 1)),
                    }
                }
                Err(e) => return Err(e),
            }
        }
        None => sample_partition(&req.reservoir, &sizes, &mut rng::stream(seed, 1)),
    };
    let mut levels_a = vec![VertexSet::from_vertices(n, req.pairs.iter().map(|p| p.0))];
    let mut levels_b = vec![VertexSet::from_vertices(n, req.pairs.iter().map(|p| p.1))];
    levels_a.extend(parts[..m].iter().cloned());
    levels_b.extend(parts[m..2 * m].iter().cloned());
    Ok(DoublingState {
        step: 0,
        t,
        plan,
        walks: vec![None; t],
        trees_a: req.pairs.iter().map(|p| SigmaTree::new(p.0)).collect(),
        trees_b: req.pairs.iter().map(|p| SigmaTree::new(p.1)).collect(),
        levels_a,
        levels_b,
        r_a: parts[2 * m].clone(),
        r_b: parts[2 * m + 1].clone(),
        ledger: Ledger::with_blocked(req.endpoints(n)),
    })
}

fn run_round(
    g: &Digraph,
    st: &mut DoublingState,
    sigma: &SignPattern,
    budget: SearchBudget,
    rng: &mut rng::Rng,
) -> Result<RoundTrace> {
    let n = g.n();
    let l = sigma.len();
    let s = st.step;
    let m = st.plan.rounds;
    let kappa = sigma.slice(s, l - s)?;
    let uncovered = st.uncovered();

    let mut leaf_pairs = Vec::new();
    let mut owner = Vec::new();
    for &i in &uncovered {
        let la = st.trees_a[i].leaf_vertices();
        let lb = st.trees_b[i].leaf_vertices();
        for j in 0..la.len() {
            leaf_pairs.push((la[j], lb[j]));
            owner.push((i, j));
        }
    }
    let target = (leaf_pairs.len() / 2).max(1);
    let (idx, walks) = connect_some(g, &leaf_pairs, &st.r_a, &st.r_b, &kappa, &mut st.ledger, target, budget, rng)?;

    // at most one connected leaf pair per tree, smallest leaf id first
    let mut per_tree: BTreeMap<usize, (VertexId, usize)> = BTreeMap::new();
    for (k, &pi) in idx.iter().enumerate() {
        let (i, _) = owner[pi];
        let leaf = leaf_pairs[pi].0;
        per_tree
            .entry(i)
            .and_modify(|e| {
                if leaf < e.0 {
                    *e = (leaf, k)
                }
            })
            .or_insert((leaf, k));
    }
    let mut choice: Vec<(VertexId, usize, usize)> = per_tree.into_iter().map(|(i, (leaf, k))| (leaf, i, k)).collect();
    choice.sort();
    let quota = if s + 1 == m { 1 } else { uncovered.len() / 2 };
    if choice.len() < quota {
        for w in &walks {
            st.ledger.release_walk(w);
        }
        return Err(Error::PartialResult {
            connected: choice.len(),
            wanted: quota,
            indices: Vec::new(),
            walks: Vec::new(),
        });
    }
    choice.truncate(quota);
    let kept: Vec<usize> = choice.iter().map(|c| c.2).collect();
    for (k, w) in walks.iter().enumerate() {
        if !kept.contains(&k) {
            st.ledger.release_walk(w);
        }
    }
    for &(_, i, k) in &choice {
        let j = owner[idx[k]].1;
        let mut vs = st.trees_a[i].path_to(j);
        vs.extend_from_slice(&walks[k].vertices[1..]);
        let mut tail = st.trees_b[i].path_to(j);
        tail.reverse();
        vs.extend_from_slice(&tail[1..]);
        let full = Walk::new(vs, sigma.clone());
        if !conforms_to(g, &full) {
            return Err(Error::InvalidParam(format!("spliced walk for pair {i} is malformed")));
        }
        st.walks[i] = Some(full);
    }

    if s + 1 < m {
        let still = st.uncovered();
        for side_a in [true, false] {
            let (trees, level) =
                if side_a { (&mut st.trees_a, &st.levels_a[s + 1]) } else { (&mut st.trees_b, &st.levels_b[s + 1]) };
            let dir = if side_a { sigma.at(s) } else { back_sign(sigma, s) };
            let sources = VertexSet::from_vertices(n, still.iter().flat_map(|&i| trees[i].leaf_vertices()));
            let tm = two_matching(&sources, level, dir, g)?;
            let children: BTreeMap<VertexId, [VertexId; 2]> = tm.assignments.into_iter().collect();
            for &i in &still {
                let kids: Vec<[VertexId; 2]> = trees[i].leaf_vertices().iter().map(|v| children[v]).collect();
                trees[i].extend(&kids, dir);
            }
        }
    }
    st.step = s + 1;
    let connected = st.connected().len();
    Ok(RoundTrace { round: st.step, connected, walks: connected, reservoir_remaining: st.reservoir_remaining() })
}

fn is_round_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::PartialResult { .. }
            | Error::HallViolation { .. }
            | Error::NoBridge { .. }
            | Error::ExpansionFailed { .. }
    )
}

/// Runs the doubling rounds, retrying from a fresh level partition when a
/// round fails. Returns the walks, the trace of the successful attempt and
/// any warnings about hypotheses that were only recorded.
pub fn connect_doubling(
    g: &Digraph,
    req: &ConnectRequest,
    scale: &ScaleConfig,
    seed: u64,
) -> Result<(Vec<Walk>, Vec<RoundTrace>, Vec<String>)> {
    req.check_structure(g, 1.0)?;
    let t = req.t();
    if t == 0 {
        return Ok((Vec::new(), Vec::new(), Vec::new()));
    }
    let p = req.hypothesis.map(|pp| pp.p).unwrap_or_else(|| g.density());
    let plan = doubling_plan(g.n(), t, req.sigma.len(), req.reservoir.len(), p, scale)?;
    let budget = SearchBudget::from_scale(scale);
    let attempts = scale.greedy_restarts + 1;
    let mut warnings = Vec::new();
    let mut last = String::new();
    for attempt in 0..attempts {
        let aseed = rng::derive_seed(seed, attempt as u64);
        let mut rng = rng::stream(aseed, 2);
        let mut st = start_state(g, req, plan, scale, aseed, &mut warnings)?;
        let mut trace = Vec::with_capacity(plan.rounds);
        let mut failed = None;
        for _ in 0..plan.rounds {
            match run_round(g, &mut st, &req.sigma, budget, &mut rng) {
                Ok(tr) => {
                    debug_assert_eq!(st.check_invariants(g, &req.sigma), Ok(()));
                    trace.push(tr);
                }
                Err(e) if is_round_failure(&e) => {
                    failed = Some(format!("round {} of attempt {attempt}: {e}", st.step + 1));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        match failed {
            None => {
                let walks = st.walks.into_iter().map(|w| w.expect("all pairs connected after m rounds")).collect();
                return Ok((walks, trace, warnings));
            }
            Some(msg) => last = msg,
        }
    }
    Err(Error::BudgetExhausted {
        attempts,
        detail: format!("doubling: {last}"),
        best_attempt: None,
        worst_violator: None,
    })
}
