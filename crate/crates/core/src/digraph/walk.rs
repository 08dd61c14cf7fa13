use super::{Digraph, SignPattern, VertexId};
use serde::{Deserialize, Serialize};

/// Vertex sequence `v_1 .. v_{l+1}` together with the pattern of length `l`
/// it is meant to realize.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub pattern: SignPattern,
}

impl Walk {
    pub fn new(vertices: Vec<VertexId>, pattern: SignPattern) -> Self {
        Walk { vertices, pattern }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("walk has at least one vertex")
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 1 && self.start() == self.end()
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[VertexId] {
        let k = self.vertices.len();
        if k <= 2 {
            &[]
        } else {
            &self.vertices[1..k - 1]
        }
    }

    /// The same walk traversed backwards; it realizes the reverse complement.
    pub fn reversed(&self) -> Walk {
        let mut v = self.vertices.clone();
        v.reverse();
        Walk { vertices: v, pattern: self.pattern.reverse_complement() }
    }
}

/// True iff `w` is a walk in `g` realizing its pattern, with all vertices
/// distinct except that the first may equal the last.
pub fn conforms_to(g: &Digraph, w: &Walk) -> bool {
    let k = w.vertices.len();
    if k < 2 || w.pattern.len() != k - 1 {
        return false;
    }
    if w.vertices.iter().any(|v| v.index() >= g.n()) {
        return false;
    }
    // distinctness over v_1..v_l, and v_{l+1} distinct from v_2..v_l
    let mut seen = super::VertexSet::new(g.n());
    for &v in &w.vertices[..k - 1] {
        if !seen.insert(v) {
            return false;
        }
    }
    let last = w.vertices[k - 1];
    if last != w.vertices[0] && seen.contains(last) {
        return false;
    }
    if last == w.vertices[0] && k == 2 {
        return false;
    }
    w.vertices.windows(2).enumerate().all(|(i, p)| g.has_signed(p[0], w.pattern.at(i), p[1]))
}

/// True iff `cycle` lists every vertex exactly once and consecutive vertices
/// (wrapping around) are joined by arcs.
pub fn verify_hamilton_cycle(g: &Digraph, cycle: &[VertexId]) -> bool {
    let n = g.n();
    if cycle.len() != n || n < 2 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v.index() >= n || seen[v.index()] {
            return false;
        }
        seen[v.index()] = true;
    }
    (0..n).all(|i| g.has_arc(cycle[i], cycle[(i + 1) % n]))
}
