//! Checkers for the pseudorandomness properties P1 (minimum semi-degree),
//! P2 (small sets are sparse) and P3 (large disjoint pairs are not too dense),
//! and for the V1..V5 partition properties Q1 (degrees into every part) and
//! Q2 (part sizes).
//!
//! Exact modes enumerate; sampled modes search randomly and adversarially and
//! can only ever prove failure.

use crate::digraph::{Digraph, Sign, VertexId, VertexSet};
use crate::error::{DegreeViolation, Error, Result};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

/// Largest `n` accepted by the exact enumerators.
pub const EXACT_LIMIT: usize = 14;

/// Sampled trials are processed in fixed blocks, each with its own stream,
/// so the verdict does not depend on the thread count.
const SAMPLE_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoParams {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
}

impl PseudoParams {
    pub fn new(n: usize, alpha: f64, p: f64) -> Result<Self> {
        let pp = PseudoParams { n, alpha, p };
        pp.validate()?;
        Ok(pp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && 0.5 + 2.0 * self.alpha <= 1.0) {
            return Err(Error::InvalidParam(format!("alpha = {} needs 0 < alpha <= 1/4", self.alpha)));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidParam(format!("p = {} outside (0, 1]", self.p)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParam("n must be positive".into()));
        }
        Ok(())
    }

    /// `max(1, ln n)`.
    pub fn log_n(&self) -> f64 {
        guarded_ln(self.n)
    }

    /// Minimum semi-degree demanded by P1: `(1/2 + 2α) n p`.
    pub fn p1_threshold(&self) -> f64 {
        (0.5 + 2.0 * self.alpha) * self.n as f64 * self.p
    }

    /// Size cap for P2 sets: `⌈ln² n / p⌉`, clipped to `n`.
    pub fn p2_cap(&self) -> usize {
        ((self.log_n().powi(2) / self.p).ceil() as usize).min(self.n)
    }

    /// P2 bound on `e(X)`: `|X| ln^{2.1} n`.
    pub fn p2_bound(&self, size: usize) -> f64 {
        size as f64 * self.log_n().powf(2.1)
    }

    /// Size floor for P3 pairs: `⌈ln^{1.1} n / p⌉`.
    pub fn p3_floor(&self) -> usize {
        (self.log_n().powf(1.1) / self.p).ceil() as usize
    }

    /// P3 bound on `e(X, Y)`: `(1 + α/2) |X| |Y| p`.
    pub fn p3_bound(&self, sx: usize, sy: usize) -> f64 {
        (1.0 + self.alpha / 2.0) * sx as f64 * sy as f64 * self.p
    }

    /// `(1/2 + α) |V_i| p`, the degree bound into every part of the partition.
    pub fn q1_threshold(&self, part_size: usize) -> f64 {
        (0.5 + self.alpha) * part_size as f64 * self.p
    }

    /// Open window for `|V_2|, |V_3|, |V_4|`: `(αn / (5(1+2α)), αn / (4(1+2α)))`.
    pub fn q2_middle_window(&self) -> (f64, f64) {
        let base = self.alpha * self.n as f64 / (1.0 + 2.0 * self.alpha);
        (base / 5.0, base / 4.0)
    }

    /// Target size of `V_1`: `n / ln³ n`.
    pub fn q2_v1_target(&self) -> f64 {
        self.n as f64 / self.log_n().powi(3)
    }
}

pub fn guarded_ln(n: usize) -> f64 {
    (n as f64).ln().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    CertifiedPass,
    CertifiedFail,
    SampledPass,
    SampledFail,
}

impl VerdictStatus {
    pub fn is_pass(self) -> bool {
        matches!(self, VerdictStatus::CertifiedPass | VerdictStatus::SampledPass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A vertex below the P1 threshold.
    Vertex { vertex: VertexId, out_degree: usize, in_degree: usize, required: f64 },
    /// A small set that is too dense (P2).
    Set { x: Vec<VertexId>, edges: usize, bound: f64 },
    /// A large disjoint pair that is too dense (P3).
    Pair { x: Vec<VertexId>, y: Vec<VertexId>, edges: usize, bound: f64 },
    /// A vertex with too few arcs into some part (Q1).
    Degree(DegreeViolation),
    /// A part whose size leaves its window (Q2).
    PartSize { part: usize, size: usize, lo: f64, hi: f64 },
    /// Wrong number of parts.
    PartCount { found: usize, expected: usize },
}

impl Witness {
    /// Recounts the violation from scratch with the raw counting operations.
    pub fn recheck(&self, g: &Digraph, params: &PseudoParams, parts: Option<&[VertexSet]>) -> bool {
        let n = g.n();
        match self {
            Witness::Vertex { vertex, required, .. } => {
                vertex.index() < n && (g.deg_pm_unchecked(*vertex, &VertexSet::full(n)) as f64) < *required
            }
            Witness::Set { x, .. } => {
                let xs = VertexSet::from_vertices(n, x.iter().copied());
                xs.len() == x.len()
                    && xs.len() <= params.p2_cap()
                    && g.edge_count_within(&xs) as f64 > params.p2_bound(xs.len())
            }
            Witness::Pair { x, y, .. } => {
                let xs = VertexSet::from_vertices(n, x.iter().copied());
                let ys = VertexSet::from_vertices(n, y.iter().copied());
                let fl = params.p3_floor();
                xs.len() == x.len()
                    && ys.len() == y.len()
                    && xs.is_disjoint(&ys)
                    && xs.len() >= fl
                    && ys.len() >= fl
                    && g.edge_count_between(&xs, &ys) as f64 > params.p3_bound(xs.len(), ys.len())
            }
            Witness::Degree(d) => match parts {
                Some(ps) if d.part < ps.len() => {
                    (g.deg_pm_unchecked(d.vertex, &ps[d.part]) as f64) < params.q1_threshold(ps[d.part].len())
                }
                _ => false,
            },
            Witness::PartSize { part, lo, hi, .. } => match parts {
                Some(ps) if *part < ps.len() => {
                    let s = ps[*part].len() as f64;
                    s < *lo || s > *hi || (*part > 0 && (s <= *lo || s >= *hi))
                }
                _ => false,
            },
            Witness::PartCount { expected, .. } => parts.is_some_and(|ps| ps.len() != *expected),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub property: String,
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub trials: usize,
    pub elapsed_ms: f64,
}

impl CheckVerdict {
    fn new(property: &str, status: VerdictStatus, witness: Option<Witness>, trials: usize, t0: Instant) -> Self {
        CheckVerdict {
            property: property.into(),
            status,
            witness,
            trials,
            elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

fn check_n(g: &Digraph, params: &PseudoParams) -> Result<()> {
    params.validate()?;
    if params.n != g.n() {
        return Err(Error::InvalidParam(format!("params.n = {} but digraph has {} vertices", params.n, g.n())));
    }
    Ok(())
}

/// Exact scan for P1. The witness is the vertex of smallest semi-degree.
pub fn check_p1(g: &Digraph, params: &PseudoParams) -> Result<CheckVerdict> {
    let t0 = Instant::now();
    check_n(g, params)?;
    let req = params.p1_threshold();
    // degrees are integers; the slack only absorbs rounding in `req`
    let slack = 1e-9 * req.max(1.0);
    let worst =
        g.vertices().map(|v| (g.out_degree(v).min(g.in_degree(v)), v)).min().filter(|&(d, _)| (d as f64) < req - slack);
    Ok(match worst {
        None => CheckVerdict::new("P1", VerdictStatus::CertifiedPass, None, g.n(), t0),
        Some((_, v)) => CheckVerdict::new(
            "P1",
            VerdictStatus::CertifiedFail,
            Some(Witness::Vertex { vertex: v, out_degree: g.out_degree(v), in_degree: g.in_degree(v), required: req }),
            g.n(),
            t0,
        ),
    })
}

fn masks(g: &Digraph, dir: Sign) -> Vec<u32> {
    g.vertices().map(|v| g.neighbors_dir(v, dir).iter().fold(0u32, |m, w| m | 1 << w.0)).collect()
}

fn mask_vertices(m: u32) -> Vec<VertexId> {
    (0..32).filter(|i| m >> i & 1 == 1).map(VertexId).collect()
}

pub fn check_p2(g: &Digraph, params: &PseudoParams, mode: CheckMode) -> Result<CheckVerdict> {
    let t0 = Instant::now();
    check_n(g, params)?;
    match mode {
        CheckMode::Exact => {
            let n = g.n();
            if n > EXACT_LIMIT {
                return Err(Error::TooLargeForExact { n, limit: EXACT_LIMIT });
            }
            let out = masks(g, Sign::Plus);
            let cap = params.p2_cap();
            let mut count = 0usize;
            for x in 1u32..(1u32 << n) {
                let s = x.count_ones() as usize;
                if s > cap {
                    continue;
                }
                count += 1;
                let e: usize = mask_vertices(x).iter().map(|v| (out[v.index()] & x).count_ones() as usize).sum();
                if e as f64 > params.p2_bound(s) {
                    let w = Witness::Set { x: mask_vertices(x), edges: e, bound: params.p2_bound(s) };
                    return Ok(CheckVerdict::new("P2", VerdictStatus::CertifiedFail, Some(w), count, t0));
                }
            }
            Ok(CheckVerdict::new("P2", VerdictStatus::CertifiedPass, None, count, t0))
        }
        CheckMode::Sampled { trials, seed } => {
            let w = sample_blocks(trials, seed, |rng, j| p2_trial(g, params, rng, j == 0));
            Ok(sampled_verdict("P2", w, trials, t0))
        }
    }
}

pub fn check_p3(g: &Digraph, params: &PseudoParams, mode: CheckMode) -> Result<CheckVerdict> {
    let t0 = Instant::now();
    check_n(g, params)?;
    match mode {
        CheckMode::Exact => {
            let n = g.n();
            if n > EXACT_LIMIT {
                return Err(Error::TooLargeForExact { n, limit: EXACT_LIMIT });
            }
            let inn = masks(g, Sign::Minus);
            let fl = params.p3_floor().max(1);
            let mut count = 0usize;
            if 2 * fl <= n {
                for x in 1u32..(1u32 << n) {
                    let sx = x.count_ones() as usize;
                    if sx < fl || n - sx < fl {
                        continue;
                    }
                    count += 1;
                    // for fixed X and |Y| = k the densest Y takes the k largest in-counts from X
                    let mut c: Vec<(usize, VertexId)> = (0..n as u32)
                        .filter(|&y| x >> y & 1 == 0)
                        .map(|y| ((inn[y as usize] & x).count_ones() as usize, VertexId(y)))
                        .collect();
                    c.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                    let mut e = 0usize;
                    for (k, &(cy, _)) in c.iter().enumerate() {
                        e += cy;
                        let sy = k + 1;
                        if sy >= fl && e as f64 > params.p3_bound(sx, sy) {
                            let mut y: Vec<VertexId> = c[..sy].iter().map(|p| p.1).collect();
                            y.sort();
                            let w = Witness::Pair { x: mask_vertices(x), y, edges: e, bound: params.p3_bound(sx, sy) };
                            return Ok(CheckVerdict::new("P3", VerdictStatus::CertifiedFail, Some(w), count, t0));
                        }
                    }
                }
            }
            Ok(CheckVerdict::new("P3", VerdictStatus::CertifiedPass, None, count, t0))
        }
        CheckMode::Sampled { trials, seed } => {
            let w = sample_blocks(trials, seed, |rng, _| p3_trial(g, params, rng));
            Ok(sampled_verdict("P3", w, trials, t0))
        }
    }
}

fn sampled_verdict(prop: &str, w: Option<Witness>, trials: usize, t0: Instant) -> CheckVerdict {
    match w {
        Some(w) => CheckVerdict::new(prop, VerdictStatus::SampledFail, Some(w), trials, t0),
        None => CheckVerdict::new(prop, VerdictStatus::SampledPass, None, trials, t0),
    }
}

/// Runs `trials` independent trials in parallel blocks; the failure with the
/// smallest trial index wins. The trial also gets its index in the block.
fn sample_blocks<F>(trials: usize, seed: u64, trial: F) -> Option<Witness>
where
    F: Fn(&mut rng::Rng, usize) -> Option<Witness> + Sync,
{
    let blocks = trials.div_ceil(SAMPLE_BLOCK);
    (0..blocks)
        .into_par_iter()
        .filter_map(|b| {
            let mut r = rng::stream(seed, b as u64);
            let here = SAMPLE_BLOCK.min(trials - b * SAMPLE_BLOCK);
            (0..here).find_map(|j| trial(&mut r, j)).map(|w| (b, w))
        })
        .min_by_key(|(b, _)| *b)
        .map(|(_, w)| w)
}

fn random_subset(n: usize, size: usize, rng: &mut rng::Rng) -> Vec<VertexId> {
    let mut all: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
    let (chosen, _) = all.partial_shuffle(rng, size);
    let mut v = chosen.to_vec();
    v.sort();
    v
}

/// A random set, then (once per block) a greedy dense set from its first vertex.
fn p2_trial(g: &Digraph, params: &PseudoParams, rng: &mut rng::Rng, grow: bool) -> Option<Witness> {
    let n = g.n();
    let cap = params.p2_cap();
    if cap == 0 {
        return None;
    }
    let s = rng.gen_range(1..=cap);
    let x = random_subset(n, s, rng);
    let xs = VertexSet::from_vertices(n, x.iter().copied());
    let e = g.edge_count_within(&xs);
    if e as f64 > params.p2_bound(s) {
        return Some(Witness::Set { x, edges: e, bound: params.p2_bound(s) });
    }
    if grow {
        greedy_dense_growth(g, params, x[0], cap)
    } else {
        None
    }
}

/// Grows a set from `start` by repeatedly adding the outside vertex with the
/// most arcs to and from the current set, testing the P2 bound at every size.
fn greedy_dense_growth(g: &Digraph, params: &PseudoParams, start: VertexId, cap: usize) -> Option<Witness> {
    let n = g.n();
    let mut inside = VertexSet::new(n);
    let mut gain = vec![0usize; n];
    let mut order = Vec::with_capacity(cap);
    let mut e = 0usize;
    // lazy max-heap on (gain, smallest id); stale entries are skipped
    let mut heap: BinaryHeap<(usize, Reverse<u32>)> = (0..n as u32).map(|w| (0, Reverse(w))).collect();
    let mut next = Some(start);
    while let Some(v) = next {
        e += gain[v.index()];
        inside.insert(v);
        order.push(v);
        if e as f64 > params.p2_bound(order.len()) {
            let mut x = order.clone();
            x.sort();
            return Some(Witness::Set { x, edges: e, bound: params.p2_bound(order.len()) });
        }
        if order.len() >= cap {
            break;
        }
        for &w in g.out_neighbors(v).iter().chain(g.in_neighbors(v)) {
            gain[w.index()] += 1;
            if !inside.contains(w) {
                heap.push((gain[w.index()], Reverse(w.0)));
            }
        }
        next = None;
        while let Some((gw, Reverse(w))) = heap.pop() {
            let w = VertexId(w);
            if !inside.contains(w) && gain[w.index()] == gw {
                next = Some(w);
                break;
            }
        }
    }
    None
}

fn p3_trial(g: &Digraph, params: &PseudoParams, rng: &mut rng::Rng) -> Option<Witness> {
    let n = g.n();
    let fl = params.p3_floor().max(1);
    if 2 * fl > n {
        return None;
    }
    let sx = rng.gen_range(fl..=n - fl);
    let sy = rng.gen_range(fl..=n - sx);
    let mut shuffled: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
    shuffled.shuffle(rng);
    let x: Vec<VertexId> = shuffled[..sx].to_vec();
    let y: Vec<VertexId> = shuffled[sx..sx + sy].to_vec();
    let check = |x: &[VertexId], y: &[VertexId]| -> Option<Witness> {
        let xs = VertexSet::from_vertices(n, x.iter().copied());
        let ys = VertexSet::from_vertices(n, y.iter().copied());
        let e = g.edge_count_between(&xs, &ys);
        let bound = params.p3_bound(x.len(), y.len());
        (e as f64 > bound).then(|| {
            let (mut x, mut y) = (x.to_vec(), y.to_vec());
            x.sort();
            y.sort();
            Witness::Pair { x, y, edges: e, bound }
        })
    };
    if let Some(w) = check(&x, &y) {
        return Some(w);
    }
    // alternate best responses: densest Y for the current X, then densest X for that Y
    let (mut x, mut y) = (x, y);
    for round in 0..4 {
        let fix_x = round % 2 == 0;
        let (fixed, dir, size) = if fix_x { (&x, Sign::Plus, sy) } else { (&y, Sign::Minus, sx) };
        let fs = VertexSet::from_vertices(n, fixed.iter().copied());
        let mut cnt = vec![0usize; n];
        for v in fs.iter() {
            for &w in g.neighbors_dir(v, dir) {
                cnt[w.index()] += 1;
            }
        }
        let mut cands: Vec<VertexId> = (0..n as u32).map(VertexId).filter(|v| !fs.contains(*v)).collect();
        cands.sort_by(|a, b| cnt[b.index()].cmp(&cnt[a.index()]).then(a.cmp(b)));
        let best = cands[..size.min(cands.len())].to_vec();
        if fix_x {
            y = best;
        } else {
            x = best;
        }
        if let Some(w) = check(&x, &y) {
            return Some(w);
        }
    }
    None
}

/// Tolerances for the part-size windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeWindows {
    /// Relative tolerance around `n / ln³ n` for `|V_1|`.
    pub v1_tolerance: f64,
}

impl Default for SizeWindows {
    fn default() -> Self {
        SizeWindows { v1_tolerance: 0.2 }
    }
}

pub fn check_partition_quality(g: &Digraph, parts: &[VertexSet], params: &PseudoParams) -> Result<CheckVerdict> {
    check_partition_quality_with(g, parts, params, SizeWindows::default())
}

/// Exact Q1 degrees for every vertex and part, then Q2 size windows.
pub fn check_partition_quality_with(
    g: &Digraph,
    parts: &[VertexSet],
    params: &PseudoParams,
    windows: SizeWindows,
) -> Result<CheckVerdict> {
    let t0 = Instant::now();
    check_n(g, params)?;
    ensure_partition(g.n(), parts)?;
    let fail = |w: Witness| Ok(CheckVerdict::new("Q", VerdictStatus::CertifiedFail, Some(w), parts.len(), t0));
    if let Some(d) = q1_violations(g, parts, params).into_iter().next() {
        return fail(Witness::Degree(d));
    }
    if parts.len() != 5 {
        return fail(Witness::PartCount { found: parts.len(), expected: 5 });
    }
    let t = params.q2_v1_target();
    let (lo1, hi1) = (t * (1.0 - windows.v1_tolerance), t * (1.0 + windows.v1_tolerance));
    let s1 = parts[0].len() as f64;
    if s1 < lo1 || s1 > hi1 {
        return fail(Witness::PartSize { part: 0, size: parts[0].len(), lo: lo1, hi: hi1 });
    }
    let (lo, hi) = params.q2_middle_window();
    for (i, p) in parts.iter().enumerate().take(4).skip(1) {
        let s = p.len() as f64;
        if s <= lo || s >= hi {
            return fail(Witness::PartSize { part: i, size: p.len(), lo, hi });
        }
    }
    Ok(CheckVerdict::new("Q", VerdictStatus::CertifiedPass, None, parts.len(), t0))
}

/// All Q1 violations, in (part, vertex) order.
pub fn q1_violations(g: &Digraph, parts: &[VertexSet], params: &PseudoParams) -> Vec<DegreeViolation> {
    let mut out = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let req = params.q1_threshold(p.len());
        for v in g.vertices() {
            let d = g.deg_pm_unchecked(v, p);
            if (d as f64) < req {
                out.push(DegreeViolation { vertex: v, part: i, degree: d, required: req });
            }
        }
    }
    out
}

pub(crate) fn ensure_partition(n: usize, parts: &[VertexSet]) -> Result<()> {
    let mut seen = VertexSet::new(n);
    for (i, p) in parts.iter().enumerate() {
        if !p.fits(n) {
            return Err(Error::NotAPartition(format!("part {i} leaves the vertex range")));
        }
        if !seen.is_disjoint(p) {
            return Err(Error::NotAPartition(format!("part {i} overlaps an earlier part")));
        }
        seen.union_with(p);
    }
    if seen.len() != n {
        return Err(Error::NotAPartition(format!("parts cover {} of {n} vertices", seen.len())));
    }
    Ok(())
}
