//! Joins path blocks end-to-start along direct arcs, so that the final
//! connection through `V_1` has few pairs to route.

use crate::digraph::{Digraph, VertexId};
use crate::matching::max_matching_indices;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Blocks in order; consecutive blocks are joined by an arc. A cyclic
/// component also has an arc from its last block to its first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub blocks: Vec<usize>,
    pub cyclic: bool,
}

struct Links {
    succ: Vec<Option<usize>>,
    pred: Vec<Option<usize>>,
}

impl Links {
    fn set(&mut self, i: usize, j: Option<usize>) {
        if let Some(old) = self.succ[i] {
            self.pred[old] = None;
        }
        if let Some(j) = j {
            if let Some(p) = self.pred[j] {
                self.succ[p] = None;
            }
            self.pred[j] = Some(i);
        }
        self.succ[i] = j;
    }

    /// Component id per block and whether each component is a cycle.
    fn components(&self) -> (Vec<usize>, Vec<bool>) {
        let m = self.succ.len();
        let mut comp = vec![usize::MAX; m];
        let mut cyclic = Vec::new();
        for i in 0..m {
            if comp[i] != usize::MAX {
                continue;
            }
            // walk back to a head, or around the cycle
            let mut head = i;
            let mut steps = 0;
            while let Some(p) = self.pred[head] {
                head = p;
                steps += 1;
                if head == i || steps > m {
                    break;
                }
            }
            let id = cyclic.len();
            let mut at = head;
            while comp[at] == usize::MAX {
                comp[at] = id;
                match self.succ[at] {
                    Some(nx) => at = nx,
                    None => break,
                }
            }
            cyclic.push(self.pred[head].is_some());
        }
        (comp, cyclic)
    }
}

/// Merges blocks (vertex paths, each non-empty) into as few components as
/// the arcs between block ends and starts allow: a maximum matching of ends
/// to starts, then local repairs that splice cycles into other components.
pub fn merge_blocks<R: Rng + ?Sized>(g: &Digraph, blocks: &[Vec<VertexId>], rng: &mut R) -> Vec<Component> {
    let m = blocks.len();
    let start = |i: usize| blocks[i][0];
    let end = |i: usize| *blocks[i].last().expect("blocks are non-empty");
    let joins = |i: usize, j: usize| i != j && g.has_arc(end(i), start(j));
    let mut adj: Vec<Vec<usize>> = (0..m).map(|i| (0..m).filter(|&j| joins(i, j)).collect()).collect();
    for a in &mut adj {
        a.shuffle(rng);
    }
    let mate = max_matching_indices(&adj, m);
    let mut links = Links { succ: vec![None; m], pred: vec![None; m] };
    for (i, j) in mate.into_iter().enumerate() {
        if let Some(j) = j {
            links.set(i, Some(j));
        }
    }

    for _ in 0..4 * m + 4 {
        let (comp, cyclic) = links.components();
        if cyclic.len() <= 1 {
            break;
        }
        let edges: Vec<usize> = (0..m).filter(|&i| links.succ[i].is_some()).collect();
        let mut done = false;
        // two edges in different components, one of them on a cycle: cross them
        'swap: for &i in &edges {
            for &k in &edges {
                let (ci, ck) = (comp[i], comp[k]);
                if ci == ck || !(cyclic[ci] || cyclic[ck]) {
                    continue;
                }
                let (si, sk) = (links.succ[i].unwrap(), links.succ[k].unwrap());
                if joins(i, sk) && joins(k, si) {
                    links.succ[i] = Some(sk);
                    links.succ[k] = Some(si);
                    links.pred[sk] = Some(i);
                    links.pred[si] = Some(k);
                    done = true;
                    break 'swap;
                }
            }
        }
        // a path end opens a cycle and takes it over
        if !done {
            'open: for e in (0..m).filter(|&e| links.succ[e].is_none()) {
                for &k in &edges {
                    if cyclic[comp[k]] && comp[k] != comp[e] && joins(e, links.succ[k].unwrap()) {
                        let sk = links.succ[k].unwrap();
                        links.set(k, None);
                        links.set(e, Some(sk));
                        done = true;
                        break 'open;
                    }
                }
            }
        }
        // a path end meets another path's start
        if !done {
            'join: for e in (0..m).filter(|&e| links.succ[e].is_none()) {
                for s in (0..m).filter(|&s| links.pred[s].is_none()) {
                    if comp[s] != comp[e] && joins(e, s) {
                        links.set(e, Some(s));
                        done = true;
                        break 'join;
                    }
                }
            }
        }
        if !done {
            break;
        }
    }

    let (comp, cyclic) = links.components();
    let mut out: Vec<Component> = cyclic.iter().map(|&c| Component { blocks: Vec::new(), cyclic: c }).collect();
    let mut placed = vec![false; m];
    for i in 0..m {
        let c = comp[i];
        if placed[i] || (!cyclic[c] && links.pred[i].is_some()) {
            continue;
        }
        let mut at = i;
        while !placed[at] {
            placed[at] = true;
            out[c].blocks.push(at);
            match links.succ[at] {
                Some(nx) => at = nx,
                None => break,
            }
        }
    }
    out
}

/// Vertex sequence of a component, cut open before block position `offset`
/// when it is cyclic.
pub fn flatten(blocks: &[Vec<VertexId>], c: &Component, offset: usize) -> Vec<VertexId> {
    let k = c.blocks.len();
    let shift = if c.cyclic && k > 0 { offset % k } else { 0 };
    (0..k).flat_map(|i| blocks[c.blocks[(i + shift) % k]].iter().copied()).collect()
}
