//! Internally disjoint σ-walks between prescribed endpoint pairs, threaded
//! through a reservoir `K`.

mod doubling;
mod expansion;
mod tree;

pub use doubling::{connect_doubling, doubling_plan, x1_expected, DoublingPlan, DoublingState, RoundTrace};
pub use expansion::{big_expansion_holds, expand_to_majority};
pub use tree::{SigmaTree, TreeNode};

use crate::digraph::{conforms_to, extract_walk, sigma_layers, Digraph, Sign, SignPattern, VertexId, VertexSet, Walk};
use crate::error::{DegreeViolation, Error, Result};
use crate::pseudorandom::PseudoParams;
use crate::rng;
use crate::scale::{ConnectStrategy, ScaleConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectRequest {
    pub pairs: Vec<(VertexId, VertexId)>,
    pub reservoir: VertexSet,
    pub sigma: SignPattern,
    /// When present, endpoint degrees into `K` are checked against
    /// `(1/2 + α) p |K|`, and `p` sizes the doubling levels.
    #[serde(default)]
    pub hypothesis: Option<PseudoParams>,
}

impl ConnectRequest {
    pub fn new(pairs: Vec<(VertexId, VertexId)>, reservoir: VertexSet, sigma: SignPattern) -> Self {
        ConnectRequest { pairs, reservoir, sigma, hypothesis: None }
    }

    pub fn with_hypothesis(mut self, params: PseudoParams) -> Self {
        self.hypothesis = Some(params);
        self
    }

    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn endpoints(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.pairs.iter().flat_map(|&(a, b)| [a, b]))
    }

    /// Structural hypotheses; these are never waived. `c_k = 1` is the bare
    /// room for the interiors.
    pub fn check_structure(&self, g: &Digraph, c_k: f64) -> Result<()> {
        let n = g.n();
        let violated = |reason: String| Err(Error::HypothesisViolated { reason, witness: None });
        if !self.reservoir.fits(n) {
            return Err(Error::InvalidParam("reservoir exceeds the digraph".into()));
        }
        for &(a, b) in &self.pairs {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
        }
        if self.pairs.is_empty() {
            return Ok(());
        }
        if self.reservoir.is_empty() {
            return violated("reservoir is empty".into());
        }
        if self.sigma.len() < 2 {
            return violated(format!("pattern length {} below 2", self.sigma.len()));
        }
        let mut a_seen = VertexSet::new(n);
        let mut b_seen = VertexSet::new(n);
        for &(a, b) in &self.pairs {
            if !a_seen.insert(a) || !b_seen.insert(b) {
                return violated(format!("endpoint repeated in pair ({a}, {b})"));
            }
        }
        if !self.endpoints(n).is_disjoint(&self.reservoir) {
            return violated("reservoir contains an endpoint".into());
        }
        let need = (c_k * self.t() as f64 * (self.sigma.len() - 1) as f64).ceil() as usize;
        if self.reservoir.len() < need {
            return violated(format!("|K| = {} below {need}", self.reservoir.len()));
        }
        Ok(())
    }

    /// Endpoints whose first (last) step has too few options inside `K`.
    pub fn degree_shortfalls(&self, g: &Digraph) -> Vec<DegreeViolation> {
        let Some(pp) = self.hypothesis else { return Vec::new() };
        let l = self.sigma.len();
        if l == 0 {
            return Vec::new();
        }
        let need = (0.5 + pp.alpha) * pp.p * self.reservoir.len() as f64;
        let first = self.sigma.at(0);
        let last = self.sigma.at(l - 1).complement();
        let mut out = Vec::new();
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            for (v, dir) in [(a, first), (b, last)] {
                let d = g.degree_into(v, dir, &self.reservoir);
                if (d as f64) < need {
                    out.push(DegreeViolation { vertex: v, part: i, degree: d, required: need });
                }
            }
        }
        out
    }
}

/// Vertices consumed by walk interiors, plus vertices that may never be used
/// as interior (endpoints of requested pairs).
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    reserved: VertexSet,
    blocked: VertexSet,
}

impl Ledger {
    pub fn new(n: usize) -> Self {
        Ledger { reserved: VertexSet::new(n), blocked: VertexSet::new(n) }
    }

    pub fn with_blocked(blocked: VertexSet) -> Self {
        Ledger { reserved: VertexSet::new(blocked.universe()), blocked }
    }

    pub fn block(&mut self, v: VertexId) {
        self.blocked.insert(v);
    }

    pub fn is_free(&self, v: VertexId) -> bool {
        !self.reserved.contains(v) && !self.blocked.contains(v)
    }

    pub fn is_reserved(&self, v: VertexId) -> bool {
        self.reserved.contains(v)
    }

    /// `r` minus everything reserved or blocked.
    pub fn available(&self, r: &VertexSet) -> VertexSet {
        let mut out = r.difference(&self.reserved);
        out.difference_with(&self.blocked);
        out
    }

    pub fn reserved(&self) -> &VertexSet {
        &self.reserved
    }

    pub fn len(&self) -> usize {
        self.reserved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reserved.is_empty()
    }

    /// Reserves the interior of `w`; all or nothing.
    pub fn reserve_walk(&mut self, w: &Walk) -> Result<()> {
        if let Some(v) = w.interior().iter().find(|&&v| !self.is_free(v)) {
            return Err(Error::InvalidParam(format!("vertex {v} is already in use")));
        }
        for &v in w.interior() {
            self.reserved.insert(v);
        }
        Ok(())
    }

    pub fn release_walk(&mut self, w: &Walk) {
        for &v in w.interior() {
            self.reserved.remove(v);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Search nodes per walk extraction.
    pub extraction: usize,
    /// Bridge candidates tried per pair.
    pub bridges: usize,
}

impl SearchBudget {
    pub fn from_scale(s: &ScaleConfig) -> Self {
        SearchBudget { extraction: s.extraction_budget, bridges: s.bridge_attempts }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { extraction: 4000, bridges: 64 }
    }
}

/// Meet in the middle: a forward σ-prefix from `a` inside `R_A`, a backward
/// σ-suffix from `b` inside `R_B`, and one bridging arc. The interior is
/// reserved in `ledger` on success.
#[allow(clippy::too_many_arguments)]
pub fn connect_pair<R: Rng + ?Sized>(
    g: &Digraph,
    a: VertexId,
    b: VertexId,
    sigma: &SignPattern,
    r_a: &VertexSet,
    r_b: &VertexSet,
    ledger: &mut Ledger,
    budget: SearchBudget,
    rng: &mut R,
) -> Result<Walk> {
    let n = g.n();
    let l = sigma.len();
    if l < 2 {
        return Err(Error::InvalidParam(format!("pattern length {l} below 2")));
    }
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if ledger.is_reserved(a) || ledger.is_reserved(b) {
        return Err(Error::InvalidParam("endpoint already used as an interior vertex".into()));
    }
    let h_a = (l - 1) / 2;
    let h_b = l - 1 - h_a;
    let ends = VertexSet::from_vertices(n, [a, b]);
    let avail_a = ledger.available(r_a).difference(&ends);
    let avail_b = ledger.available(r_b).difference(&ends);
    let bwd_pat = sigma.slice(h_a + 1, l)?.reverse_complement();
    let start = VertexSet::from_vertices(n, [a]);
    // with l = 2 the forward half is just `a`
    let fwd_pat = if h_a > 0 { Some(sigma.prefix(h_a)?) } else { None };
    let fl = match &fwd_pat {
        Some(fp) => sigma_layers(g, &start, &avail_a, fp)?,
        None => vec![start],
    };
    if let Some(level) = fl.iter().position(VertexSet::is_empty) {
        return Err(Error::ExpansionFailed { level, frontier: 0, threshold: 1 });
    }
    let bl = sigma_layers(g, &VertexSet::from_vertices(n, [b]), &avail_b, &bwd_pat)?;
    if let Some(level) = bl.iter().position(VertexSet::is_empty) {
        return Err(Error::ExpansionFailed { level, frontier: 0, threshold: 1 });
    }
    let (f_last, b_last) = (&fl[h_a], &bl[h_b]);
    let bridge = sigma.at(h_a);
    let none = VertexSet::new(n);
    let mut froms = f_last.to_vec();
    froms.shuffle(rng);
    let mut tries = 0;
    'outer: for v in froms {
        let mut ws: Vec<VertexId> =
            g.neighbors_dir(v, bridge).iter().copied().filter(|&w| w != v && b_last.contains(w)).collect();
        if ws.is_empty() {
            continue;
        }
        tries += 1;
        let fw = match &fwd_pat {
            Some(fp) => extract_walk(g, &fl, fp, v, &none, budget.extraction, rng).map(|w| w.vertices),
            None => Some(vec![a]),
        };
        let Some(fw) = fw else {
            if tries >= budget.bridges {
                break;
            }
            continue;
        };
        let avoid = VertexSet::from_vertices(n, fw[1..].iter().copied());
        ws.shuffle(rng);
        for w in ws {
            if avoid.contains(w) {
                continue;
            }
            if let Some(bw) = extract_walk(g, &bl, &bwd_pat, w, &avoid, budget.extraction, rng) {
                let mut vs = fw.clone();
                vs.extend(bw.vertices.iter().rev());
                let walk = Walk::new(vs, sigma.clone());
                if conforms_to(g, &walk) {
                    ledger.reserve_walk(&walk)?;
                    return Ok(walk);
                }
            }
            tries += 1;
            if tries >= budget.bridges {
                break 'outer;
            }
        }
    }
    Err(Error::NoBridge { forward: f_last.len(), backward: b_last.len() })
}

fn is_search_failure(e: &Error) -> bool {
    matches!(e, Error::NoBridge { .. } | Error::ExpansionFailed { .. })
}

/// Connects at least `target` of the pairs (stopping once it has that many),
/// in random order. All or nothing with respect to `ledger`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn connect_some<R: Rng + ?Sized>(
    g: &Digraph,
    pairs: &[(VertexId, VertexId)],
    r_a: &VertexSet,
    r_b: &VertexSet,
    sigma: &SignPattern,
    ledger: &mut Ledger,
    target: usize,
    budget: SearchBudget,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<Walk>)> {
    if target == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let snapshot = ledger.clone();
    for &(a, b) in pairs {
        ledger.block(a);
        ledger.block(b);
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(rng);
    let mut got: Vec<(usize, Walk)> = Vec::new();
    for i in order {
        if got.len() == target {
            break;
        }
        let (a, b) = pairs[i];
        match connect_pair(g, a, b, sigma, r_a, r_b, ledger, budget, rng) {
            Ok(w) => got.push((i, w)),
            Err(e) if is_search_failure(&e) => {}
            Err(e) => {
                *ledger = snapshot;
                return Err(e);
            }
        }
    }
    got.sort_by_key(|x| x.0);
    let (indices, walks): (Vec<usize>, Vec<Walk>) = got.into_iter().unzip();
    if indices.len() < target {
        *ledger = snapshot;
        return Err(Error::PartialResult { connected: indices.len(), wanted: target, indices, walks });
    }
    Ok((indices, walks))
}

/// Connects `⌊t/2⌋` of the `t` pairs.
#[allow(clippy::too_many_arguments)]
pub fn connect_half_pairs<R: Rng + ?Sized>(
    g: &Digraph,
    pairs: &[(VertexId, VertexId)],
    r_a: &VertexSet,
    r_b: &VertexSet,
    sigma: &SignPattern,
    ledger: &mut Ledger,
    budget: SearchBudget,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<Walk>)> {
    connect_some(g, pairs, r_a, r_b, sigma, ledger, pairs.len() / 2, budget, rng)
}

/// Result of [`connect_all`]; `walks[i]` joins `pairs[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectOutcome {
    pub walks: Vec<Walk>,
    pub strategy: ConnectStrategy,
    pub trace: Vec<RoundTrace>,
    pub warnings: Vec<String>,
}

fn connect_greedy<R: Rng + ?Sized>(
    g: &Digraph,
    req: &ConnectRequest,
    scale: &ScaleConfig,
    rng: &mut R,
) -> Result<Vec<Walk>> {
    let n = g.n();
    let t = req.t();
    let budget = SearchBudget::from_scale(scale);
    let mut order: Vec<usize> = (0..t).collect();
    order.shuffle(rng);
    let attempts = scale.greedy_restarts + 1;
    let mut last = String::new();
    for _ in 0..attempts {
        let mut ledger = Ledger::with_blocked(req.endpoints(n));
        let mut walks: Vec<Option<Walk>> = vec![None; t];
        let mut failed = None;
        for (done, &i) in order.iter().enumerate() {
            let (a, b) = req.pairs[i];
            match connect_pair(g, a, b, &req.sigma, &req.reservoir, &req.reservoir, &mut ledger, budget, rng) {
                Ok(w) => walks[i] = Some(w),
                Err(e) if is_search_failure(&e) => {
                    last = format!("pair {i} failed after {done} connections: {e}");
                    failed = Some(i);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        match failed {
            None => return Ok(walks.into_iter().map(|w| w.expect("every pair connected")).collect()),
            Some(i) => {
                order.shuffle(rng);
                let at = order.iter().position(|&j| j == i).expect("index present");
                order.remove(at);
                order.insert(0, i);
            }
        }
    }
    Err(Error::BudgetExhausted {
        attempts,
        detail: format!("greedy: {last}"),
        best_attempt: None,
        worst_violator: None,
    })
}

/// `t` pairwise internally disjoint σ-walks, walk `i` from `a_i` to `b_i`,
/// interiors inside `K`.
pub fn connect_all(g: &Digraph, req: &ConnectRequest, scale: &ScaleConfig, seed: u64) -> Result<ConnectOutcome> {
    req.check_structure(g, 1.0)?;
    let mut warnings = Vec::new();
    if let Err(e) = req.check_structure(g, scale.reservoir_factor) {
        if scale.strict {
            return Err(e);
        }
        warnings.push(format!("reservoir below {} t (l - 1): {e}", scale.reservoir_factor));
    }
    let short = req.degree_shortfalls(g);
    if let Some(w) = short.first() {
        if scale.strict {
            return Err(Error::HypothesisViolated {
                reason: format!("{} endpoint degrees into the reservoir are too small", short.len()),
                witness: Some(w.clone()),
            });
        }
        warnings.push(format!("{} endpoint degrees into the reservoir below the bound", short.len()));
    }
    let outcome = |walks, strategy, trace, warnings| ConnectOutcome { walks, strategy, trace, warnings };
    if req.pairs.is_empty() {
        return Ok(outcome(Vec::new(), scale.strategy, Vec::new(), warnings));
    }
    let mut rng = rng::rng_from(seed);
    let doubling_seed = rng::derive_seed(seed, 1);
    match scale.strategy {
        ConnectStrategy::Greedy => {
            let walks = connect_greedy(g, req, scale, &mut rng)?;
            Ok(outcome(walks, ConnectStrategy::Greedy, Vec::new(), warnings))
        }
        ConnectStrategy::Doubling => {
            let (walks, trace, w) = connect_doubling(g, req, scale, doubling_seed)?;
            warnings.extend(w);
            Ok(outcome(walks, ConnectStrategy::Doubling, trace, warnings))
        }
        ConnectStrategy::GreedyThenDoubling => match connect_greedy(g, req, scale, &mut rng) {
            Ok(walks) => Ok(outcome(walks, ConnectStrategy::Greedy, Vec::new(), warnings)),
            Err(greedy_err) => match connect_doubling(g, req, scale, doubling_seed) {
                Ok((walks, trace, w)) => {
                    warnings.push(format!("greedy gave up ({greedy_err}); doubling succeeded"));
                    warnings.extend(w);
                    Ok(outcome(walks, ConnectStrategy::Doubling, trace, warnings))
                }
                Err(e) => Err(Error::BudgetExhausted {
                    attempts: scale.greedy_restarts + 1,
                    detail: format!("{greedy_err}; doubling: {e}"),
                    best_attempt: None,
                    worst_violator: None,
                }),
            },
        },
    }
}

/// Checks a finished connection from scratch: patterns, endpoints, interiors
/// inside `K`, pairwise disjointness, and no interior on any endpoint.
pub fn audit_walks(g: &Digraph, req: &ConnectRequest, walks: &[Walk]) -> std::result::Result<(), String> {
    let n = g.n();
    if walks.len() != req.t() {
        return Err(format!("{} walks for {} pairs", walks.len(), req.t()));
    }
    let ends = req.endpoints(n);
    let mut used = VertexSet::new(n);
    for (i, (w, &(a, b))) in walks.iter().zip(&req.pairs).enumerate() {
        if w.pattern != req.sigma || !conforms_to(g, w) {
            return Err(format!("walk {i} does not realize the pattern"));
        }
        if w.start() != a || w.end() != b {
            return Err(format!("walk {i} has the wrong endpoints"));
        }
        for &v in w.interior() {
            if !req.reservoir.contains(v) {
                return Err(format!("walk {i} leaves the reservoir at {v}"));
            }
            if ends.contains(v) {
                return Err(format!("walk {i} passes through endpoint {v}"));
            }
            if !used.insert(v) {
                return Err(format!("walk {i} reuses {v}"));
            }
        }
    }
    Ok(())
}

/// Sign of the `i`-th step of the reversed walk through the B-side trees.
pub(crate) fn back_sign(sigma: &SignPattern, i: usize) -> Sign {
    sigma.at(sigma.len() - 1 - i).complement()
}
