//! Absorbers: a cycle of length `4k + 3` through a special vertex `x` with
//! `2k` chord paths, containing two `x_s -> x_t` paths whose vertex sets
//! differ exactly by `x`. Chaining the non-absorbing paths gives the
//! backbone `P*`; swapping segments absorbs any subset of the specials.

use crate::connector::{connect_all, ConnectOutcome, ConnectRequest};
use crate::digraph::{conforms_to, Digraph, Sign, SignPattern, VertexId, VertexSet, Walk};
use crate::error::{Error, Result};
use crate::pseudorandom::PseudoParams;
use crate::rng;
use crate::scale::ScaleConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Template vertex names; `S(i)` and `T(i)` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Xs,
    X,
    S(usize),
    T(usize),
    Xt,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Xs => write!(f, "x_s"),
            Label::X => write!(f, "x"),
            Label::S(i) => write!(f, "s{i}"),
            Label::T(i) => write!(f, "t{i}"),
            Label::Xt => write!(f, "x_t"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberTemplate {
    pub k: usize,
    pub labels: Vec<Label>,
    pub arcs: Vec<(Label, Label)>,
    /// `(s_i, t_i)` for `i = 1..=2k`.
    pub chords: Vec<(Label, Label)>,
}

impl AbsorberTemplate {
    /// Labels in cycle order starting at `x` and leaving along `x -> s_1`;
    /// the first label is repeated at the end.
    pub fn cycle_order(&self) -> Vec<Label> {
        let mut order = vec![Label::X];
        let mut prev: Option<usize> = None;
        let mut cur = Label::X;
        loop {
            let (i, next) = self
                .arcs
                .iter()
                .enumerate()
                .filter(|&(i, _)| Some(i) != prev)
                .find_map(|(i, &(u, v))| {
                    if u == cur && (prev.is_some() || v == Label::S(1)) {
                        Some((i, v))
                    } else if v == cur && prev.is_some() {
                        Some((i, u))
                    } else {
                        None
                    }
                })
                .expect("every template vertex has degree 2");
            order.push(next);
            prev = Some(i);
            cur = next;
            if cur == Label::X {
                return order;
            }
        }
    }

    /// Arc count `4k + 3` and every vertex of degree 2.
    fn degree_check(&self) -> bool {
        let mut deg: BTreeMap<Label, usize> = BTreeMap::new();
        for &(u, v) in &self.arcs {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        self.arcs.len() == 4 * self.k + 3 && deg.len() == self.labels.len() && deg.values().all(|&d| d == 2)
    }
}

pub fn absorber_template(k: usize) -> Result<AbsorberTemplate> {
    if k == 0 {
        return Err(Error::InvalidParam("absorber needs k >= 1".into()));
    }
    use Label::*;
    let mut labels = vec![Xs, X];
    labels.extend((1..=2 * k).map(S));
    labels.extend((1..=2 * k).map(T));
    labels.push(Xt);
    let mut arcs = vec![(Xs, X), (X, S(1))];
    arcs.extend((1..2 * k).map(|i| (T(i), S(i + 1))));
    arcs.push((T(2 * k), Xt));
    arcs.push((Xs, S(2)));
    arcs.extend((1..k).map(|i| (T(2 * i), S(2 * i + 2))));
    arcs.extend((1..k).map(|i| (T(2 * i - 1), S(2 * i + 1))));
    arcs.push((T(2 * k - 1), Xt));
    arcs.push((T(2 * k), S(1)));
    let chords = (1..=2 * k).map(|i| (S(i), T(i))).collect();
    let t = AbsorberTemplate { k, labels, arcs, chords };
    if !t.degree_check() {
        return Err(Error::InvalidParam(format!("template for k = {k} is not a cycle")));
    }
    Ok(t)
}

/// Signs met when walking the template cycle from `x` along `x -> s_1`.
pub fn absorber_sigma(k: usize) -> Result<SignPattern> {
    let t = absorber_template(k)?;
    let order = t.cycle_order();
    let signs =
        order.windows(2).map(|w| if t.arcs.contains(&(w[0], w[1])) { Sign::Plus } else { Sign::Minus }).collect();
    SignPattern::new(signs)
}

/// A template embedded in the host digraph with its chord paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorber {
    pub k: usize,
    /// Chord length.
    pub ell: usize,
    pub x: VertexId,
    pub x_s: VertexId,
    pub x_t: VertexId,
    /// `s[i - 1]` is `s_i`.
    pub s: Vec<VertexId>,
    pub t: Vec<VertexId>,
    /// `chords[i - 1]` runs from `s_i` to `t_i`.
    pub chords: Vec<Walk>,
}

/// Forensic JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberDump {
    pub k: usize,
    pub ell: usize,
    pub assignment: BTreeMap<String, VertexId>,
    pub cycle_arcs: Vec<(VertexId, VertexId)>,
    pub chords: Vec<Vec<VertexId>>,
}

impl Absorber {
    /// Reads the template labels off a closed walk realizing
    /// [`absorber_sigma`] from `x`. Chords are attached later.
    pub fn from_cycle(k: usize, cycle: &Walk) -> Result<Absorber> {
        let t = absorber_template(k)?;
        let order = t.cycle_order();
        if cycle.vertices.len() != order.len() || !cycle.is_closed() {
            return Err(Error::InvalidParam("cycle does not have the template length".into()));
        }
        let at: BTreeMap<Label, VertexId> = order.iter().copied().zip(cycle.vertices.iter().copied()).collect();
        Ok(Absorber {
            k,
            ell: 0,
            x: at[&Label::X],
            x_s: at[&Label::Xs],
            x_t: at[&Label::Xt],
            s: (1..=2 * k).map(|i| at[&Label::S(i)]).collect(),
            t: (1..=2 * k).map(|i| at[&Label::T(i)]).collect(),
            chords: Vec::new(),
        })
    }

    pub fn vertex(&self, l: Label) -> VertexId {
        match l {
            Label::Xs => self.x_s,
            Label::X => self.x,
            Label::S(i) => self.s[i - 1],
            Label::T(i) => self.t[i - 1],
            Label::Xt => self.x_t,
        }
    }

    /// Cycle vertices followed by chord interiors.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = vec![self.x_s, self.x];
        out.extend(&self.s);
        out.extend(&self.t);
        out.push(self.x_t);
        for c in &self.chords {
            out.extend(c.interior());
        }
        out
    }

    fn chord_interior(&self, i: usize) -> &[VertexId] {
        self.chords[i - 1].interior()
    }

    fn push_chord(&self, out: &mut Vec<VertexId>, i: usize) {
        out.push(self.s[i - 1]);
        out.extend_from_slice(self.chord_interior(i));
        out.push(self.t[i - 1]);
    }

    /// `x_s, x, s_1, P_1, t_1, s_2, P_2, ..., t_{2k}, x_t`.
    pub fn absorbing_sequence(&self) -> Vec<VertexId> {
        let mut out = vec![self.x_s, self.x];
        for i in 1..=2 * self.k {
            self.push_chord(&mut out, i);
        }
        out.push(self.x_t);
        out
    }

    /// `x_s, s_2, P_2, t_2, s_4, ..., t_{2k}, s_1, P_1, t_1, s_3, ..., t_{2k-1}, x_t`.
    pub fn non_absorbing_sequence(&self) -> Vec<VertexId> {
        let mut out = vec![self.x_s];
        for i in (2..=2 * self.k).step_by(2) {
            self.push_chord(&mut out, i);
        }
        for i in (1..2 * self.k).step_by(2) {
            self.push_chord(&mut out, i);
        }
        out.push(self.x_t);
        out
    }

    pub fn dump(&self) -> AbsorberDump {
        let t = absorber_template(self.k).expect("absorber has k >= 1");
        AbsorberDump {
            k: self.k,
            ell: self.ell,
            assignment: t.labels.iter().map(|&l| (l.to_string(), self.vertex(l))).collect(),
            cycle_arcs: t.arcs.iter().map(|&(u, v)| (self.vertex(u), self.vertex(v))).collect(),
            chords: self.chords.iter().map(|c| c.vertices.clone()).collect(),
        }
    }
}

fn directed(vertices: Vec<VertexId>) -> Walk {
    let len = vertices.len().saturating_sub(1).max(1);
    Walk::new(vertices, SignPattern::all_plus(len))
}

pub fn absorbing_path(a: &Absorber) -> Walk {
    directed(a.absorbing_sequence())
}

pub fn non_absorbing_path(a: &Absorber) -> Walk {
    directed(a.non_absorbing_sequence())
}

/// Template embedding, chord shapes, disjointness and both paths.
pub fn validate_absorber(g: &Digraph, a: &Absorber) -> bool {
    let Ok(t) = absorber_template(a.k) else { return false };
    if a.s.len() != 2 * a.k || a.t.len() != 2 * a.k || a.chords.len() != 2 * a.k || a.ell < 1 {
        return false;
    }
    let all = a.vertices();
    if all.iter().any(|v| v.index() >= g.n()) {
        return false;
    }
    let distinct = VertexSet::from_vertices(g.n(), all.iter().copied());
    if distinct.len() != all.len() || all.len() != 3 + 2 * a.k * (a.ell + 1) {
        return false;
    }
    if !t.arcs.iter().all(|&(u, v)| g.has_arc(a.vertex(u), a.vertex(v))) {
        return false;
    }
    let chords_ok = a.chords.iter().enumerate().all(|(i, c)| {
        c.len() == a.ell
            && c.start() == a.s[i]
            && c.end() == a.t[i]
            && c.pattern == SignPattern::all_plus(a.ell)
            && conforms_to(g, c)
    });
    if !chords_ok {
        return false;
    }
    let (pa, pn) = (absorbing_path(a), non_absorbing_path(a));
    if !conforms_to(g, &pa) || !conforms_to(g, &pn) {
        return false;
    }
    if pa.start() != pn.start() || pa.end() != pn.end() || pa.len() != pn.len() + 1 {
        return false;
    }
    let va = VertexSet::from_vertices(g.n(), pa.vertices.iter().copied());
    let vn = VertexSet::from_vertices(g.n(), pn.vertices.iter().copied());
    vn.is_subset(&va) && va.difference(&vn).to_vec() == vec![a.x]
}

/// Everything a connector call reports beyond the walks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildNotes {
    pub warnings: Vec<String>,
    pub doubling_rounds: usize,
}

impl BuildNotes {
    fn absorb(&mut self, what: &str, out: &ConnectOutcome) {
        self.warnings.extend(out.warnings.iter().map(|w| format!("{what}: {w}")));
        self.doubling_rounds += out.trace.len();
    }
}

/// One absorber per `x ∈ V_1`: cycles through `V_2`, chords through `V_3`.
pub fn build_absorbers(
    g: &Digraph,
    v1: &VertexSet,
    v2: &VertexSet,
    v3: &VertexSet,
    params: Option<&PseudoParams>,
    scale: &ScaleConfig,
    seed: u64,
) -> Result<(Vec<Absorber>, BuildNotes)> {
    let n = g.n();
    if !v1.is_disjoint(v2) || !v1.is_disjoint(v3) || !v2.is_disjoint(v3) {
        return Err(Error::InvalidParam("V1, V2, V3 must be disjoint".into()));
    }
    let mut notes = BuildNotes::default();
    if v1.is_empty() {
        return Ok((Vec::new(), notes));
    }
    let k = scale.k(n);
    let ell = scale.chord_len(n);
    let with = |r: ConnectRequest| match params {
        Some(pp) => r.with_hypothesis(*pp),
        None => r,
    };
    let cycles = with(ConnectRequest::new(v1.iter().map(|x| (x, x)).collect(), v2.clone(), absorber_sigma(k)?));
    let out = connect_all(g, &cycles, scale, rng::derive_seed(seed, 1))?;
    notes.absorb("absorber cycles", &out);
    let mut absorbers = out.walks.iter().map(|w| Absorber::from_cycle(k, w)).collect::<Result<Vec<_>>>()?;

    let pairs: Vec<(VertexId, VertexId)> =
        absorbers.iter().flat_map(|a| a.s.iter().copied().zip(a.t.iter().copied())).collect();
    let chords = with(ConnectRequest::new(pairs, v3.clone(), SignPattern::all_plus(ell)));
    let out = connect_all(g, &chords, scale, rng::derive_seed(seed, 2))?;
    notes.absorb("chords", &out);
    let mut walks = out.walks.into_iter();
    for a in &mut absorbers {
        a.ell = ell;
        a.chords = walks.by_ref().take(2 * k).collect();
    }
    Ok((absorbers, notes))
}

/// The absorbers chained by connector walks into one directed path `P*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingStructure {
    pub absorbers: Vec<Absorber>,
    /// `links[i]` runs from `x_t` of absorber `i` to `x_s` of absorber `i + 1`.
    pub links: Vec<Walk>,
}

impl AbsorbingStructure {
    pub fn specials(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.absorbers.iter().map(|a| a.x))
    }

    /// The backbone `P*` as a vertex sequence.
    pub fn backbone(&self) -> Vec<VertexId> {
        self.assemble(|_| false)
    }

    fn assemble(&self, take: impl Fn(&Absorber) -> bool) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (i, a) in self.absorbers.iter().enumerate() {
            out.extend(if take(a) { a.absorbing_sequence() } else { a.non_absorbing_sequence() });
            if let Some(l) = self.links.get(i) {
                out.extend_from_slice(l.interior());
            }
        }
        out
    }
}

pub fn build_backbone(
    g: &Digraph,
    absorbers: Vec<Absorber>,
    v4: &VertexSet,
    params: Option<&PseudoParams>,
    scale: &ScaleConfig,
    seed: u64,
) -> Result<(AbsorbingStructure, BuildNotes)> {
    let mut notes = BuildNotes::default();
    if absorbers.is_empty() {
        return Err(Error::InvalidParam("backbone needs at least one absorber".into()));
    }
    let n = g.n();
    if absorbers.iter().flat_map(|a| a.vertices()).any(|v| v4.contains(v)) {
        return Err(Error::InvalidParam("absorbers meet V4".into()));
    }
    let pairs: Vec<(VertexId, VertexId)> = absorbers.windows(2).map(|w| (w[0].x_t, w[1].x_s)).collect();
    let mut req = ConnectRequest::new(pairs, v4.clone(), SignPattern::all_plus(scale.backbone_len(n)));
    if let Some(pp) = params {
        req = req.with_hypothesis(*pp);
    }
    let out = connect_all(g, &req, scale, rng::derive_seed(seed, 3))?;
    notes.absorb("backbone", &out);
    Ok((AbsorbingStructure { absorbers, links: out.walks }, notes))
}

/// `P*` with the absorbing path used for every absorber whose special is in `w`.
pub fn absorb(structure: &AbsorbingStructure, w: &VertexSet) -> Result<Walk> {
    let specials = structure.specials(w.universe());
    if let Some(v) = w.iter().find(|&v| !specials.contains(v)) {
        return Err(Error::NotAbsorbable(v));
    }
    Ok(directed(structure.assemble(|a| w.contains(a.x))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_k1() {
        use Label::*;
        let t = absorber_template(1).unwrap();
        assert_eq!(t.labels.len(), 7);
        let want = [(Xs, X), (X, S(1)), (T(1), S(2)), (T(2), Xt), (Xs, S(2)), (T(1), Xt), (T(2), S(1))];
        assert_eq!(t.arcs.len(), 7);
        assert!(want.iter().all(|a| t.arcs.contains(a)));
        assert_eq!(absorber_sigma(1).unwrap().to_string(), "+-+-+-+");
    }

    #[test]
    fn template_k3_has_fifteen_arcs() {
        let t = absorber_template(3).unwrap();
        assert_eq!((t.labels.len(), t.arcs.len()), (15, 15));
        assert_eq!(t.cycle_order().len(), 16);
    }

    #[test]
    fn absorber_on_complete_digraph() {
        let g = Digraph::complete(20);
        let scale = ScaleConfig { chord_floor: 2, ..ScaleConfig::permissive() };
        let v1 = VertexSet::from_indices(20, [0]);
        let v2 = VertexSet::from_indices(20, 1..7);
        let v3 = VertexSet::from_indices(20, 7..9);
        let (abs, _) = build_absorbers(&g, &v1, &v2, &v3, None, &scale, 1).unwrap();
        assert_eq!(abs.len(), 1);
        assert!(validate_absorber(&g, &abs[0]));
        assert_eq!(abs[0].vertices().len(), 3 + 2 * (2 + 1));
        let (st, _) = build_backbone(&g, abs, &VertexSet::new(20), None, &scale, 1).unwrap();
        assert_eq!(st.backbone(), non_absorbing_path(&st.absorbers[0]).vertices);
        let full = absorb(&st, &v1).unwrap();
        assert_eq!(full.vertices, absorbing_path(&st.absorbers[0]).vertices);
        assert!(matches!(absorb(&st, &VertexSet::from_indices(20, [5])), Err(Error::NotAbsorbable(_))));
    }

    #[test]
    fn empty_v1_builds_nothing() {
        let g = Digraph::complete(10);
        let e = VertexSet::new(10);
        let (abs, _) = build_absorbers(&g, &e, &e, &e, None, &ScaleConfig::default(), 0).unwrap();
        assert!(abs.is_empty());
    }
}
