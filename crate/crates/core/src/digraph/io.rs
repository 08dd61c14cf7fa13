//! Edge-list text format: a header line `n m`, then `m` lines `u v`
//! (0-indexed arc u -> v).

use super::{Digraph, VertexId};
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

fn parse_pair(line: &str, lineno: usize, n: Option<usize>) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse { line: lineno, msg: format!("missing {what}") })?
            .parse::<usize>()
            .map_err(|e| Error::Parse { line: lineno, msg: format!("bad {what}: {e}") })
    };
    let u = next("source")?;
    let v = next("target")?;
    if it.next().is_some() {
        return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
    }
    if let Some(n) = n {
        if u >= n || v >= n {
            return Err(Error::Parse { line: lineno, msg: format!("vertex out of range for n = {n}") });
        }
    }
    if u == v {
        return Err(Error::Parse { line: lineno, msg: format!("self-loop at vertex {u}") });
    }
    Ok((u, v))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the edge-list format. Self-loops, duplicates and count mismatches
/// are rejected with the offending line number.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let mut h = header.split_whitespace().map(|t| t.parse::<usize>());
    let (n, m) = match (h.next(), h.next(), h.next()) {
        (Some(Ok(n)), Some(Ok(m)), None) => (n, m),
        _ => return Err(Error::Parse { line: hl, msg: "header must be `n m`".into() }),
    };
    let mut seen = HashSet::with_capacity(m);
    let mut arcs = Vec::with_capacity(m);
    for (ln, line) in lines {
        let (u, v) = parse_pair(line, ln, Some(n))?;
        if !seen.insert((u, v)) {
            return Err(Error::Parse { line: ln, msg: format!("duplicate arc {u} {v}") });
        }
        arcs.push((u, v));
    }
    if arcs.len() != m {
        return Err(Error::Parse { line: hl, msg: format!("header promises {m} arcs, found {}", arcs.len()) });
    }
    Digraph::from_arcs(n, arcs)
}

/// Header-less arc list, as used for custom adversaries.
pub fn parse_arc_list(text: &str) -> Result<Vec<(VertexId, VertexId)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        let (u, v) = parse_pair(line, ln, None)?;
        if !seen.insert((u, v)) {
            return Err(Error::Parse { line: ln, msg: format!("duplicate arc {u} {v}") });
        }
        out.push((VertexId::from(u), VertexId::from(v)));
    }
    Ok(out)
}

pub fn write_edge_list(g: &Digraph) -> String {
    let mut s = String::with_capacity(16 + g.arc_count() * 10);
    let _ = writeln!(s, "{} {}", g.n(), g.arc_count());
    for (u, v) in g.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Digraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list_file(g: &Digraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}
