//! Canonical relabeling of small labeled graphs.
//!
//! Individualization/refinement: vertices are colored by distinguished
//! positions and loops, colors are refined by labeled neighbourhoods, and the
//! first non-singleton cell is split by trying each member. Members that are
//! twins (swapping them is an automorphism) lead to isomorphic subtrees, so
//! only one per twin class is explored. The canonical form is the least leaf
//! encoding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Largest vertex count accepted by [`canonical_form`].
pub const MAX_CANON_VERTICES: usize = 12;

/// Isomorphism-invariant encoding: equal iff the graphs are isomorphic by a
/// bijection preserving labels and the ordered distinguished tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub labels: usize,
    pub distinguished: Vec<usize>,
    /// `(label, u, v)` with `u <= v`, sorted.
    pub edges: Vec<(usize, usize, usize)>,
}

struct Search<'a> {
    g: &'a LabeledGraph,
    // (neighbour, label), self-loops excluded
    adj: Vec<Vec<(usize, usize)>>,
    best: Option<CanonicalForm>,
}

pub fn canonical_form(g: &LabeledGraph) -> Result<CanonicalForm> {
    let nv = g.vertex_count();
    if nv > MAX_CANON_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertices for canonical form",
            actual: nv,
            cap: MAX_CANON_VERTICES,
        });
    }
    let mut adj = vec![Vec::new(); nv];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        adj[e.u].push((e.v, e.label));
        adj[e.v].push((e.u, e.label));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let initial: Vec<(Vec<usize>, Vec<usize>)> = (0..nv)
        .map(|v| {
            let positions = g
                .distinguished()
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == v)
                .map(|(k, _)| k)
                .collect();
            let loops = g
                .edges()
                .iter()
                .filter(|e| e.is_loop() && e.u == v)
                .map(|e| e.label)
                .collect();
            (positions, loops)
        })
        .collect();
    let mut search = Search { g, adj, best: None };
    let colors = search.refine(rank(&initial));
    search.descend(colors);
    Ok(search.best.expect("search visits at least one leaf"))
}

/// Dense ranks of keys, ordered by key.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

impl Search<'_> {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut count = distinct(&colors);
        loop {
            let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(usize, usize)> = self.adj[v]
                        .iter()
                        .map(|&(w, label)| (label, colors[w]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_count = distinct(&next);
            if next_count == count {
                return next;
            }
            colors = next;
            count = next_count;
        }
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        let strip = |v: usize, other: usize| -> Vec<(usize, usize)> {
            self.adj[v]
                .iter()
                .map(|&(w, l)| (if w == other { v } else { w }, l))
                .map(|(w, l)| (if w == v { usize::MAX } else { w }, l))
                .collect::<Vec<_>>()
        };
        let mut na = strip(a, b);
        let mut nb = strip(b, a);
        na.sort_unstable();
        nb.sort_unstable();
        let loops = |v: usize| -> Vec<usize> {
            self.g
                .edges()
                .iter()
                .filter(|e| e.is_loop() && e.u == v)
                .map(|e| e.label)
                .collect()
        };
        let pos = |v: usize| -> Vec<usize> {
            self.g
                .distinguished()
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == v)
                .map(|(k, _)| k)
                .collect()
        };
        na == nb && loops(a) == loops(b) && pos(a) == pos(b)
    }

    fn descend(&mut self, colors: Vec<usize>) {
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
            self.leaf(&colors);
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
        let mut reps: Vec<usize> = Vec::new();
        for &v in &members {
            if reps.iter().any(|&r| self.twins(r, v)) {
                continue;
            }
            reps.push(v);
            let keyed: Vec<(usize, usize)> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| (c, usize::from(c == cell && w != v)))
                .collect();
            let next = self.refine(rank(&keyed));
            self.descend(next);
        }
    }

    fn leaf(&mut self, perm: &[usize]) {
        let mut edges: Vec<(usize, usize, usize)> = self
            .g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.u], perm[e.v]);
                (e.label, a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let form = CanonicalForm {
            vertices: self.g.vertex_count(),
            labels: self.g.label_count(),
            distinguished: self.g.distinguished().iter().map(|&d| perm[d]).collect(),
            edges,
        };
        if self.best.as_ref().is_none_or(|b| form < *b) {
            self.best = Some(form);
        }
    }
}
