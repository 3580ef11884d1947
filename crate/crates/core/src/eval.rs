//! The relation `G(R₁, …, Rₙ)` of tuples that a labeled graph can connect.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::relation::FinRelation;

/// A witnessing assignment of universe elements to graph vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub assignment: Vec<usize>,
}

impl Connection {
    /// `{"vertex-id": element, …}` keyed by the graph's vertex names.
    pub fn to_named(&self, g: &LabeledGraph) -> BTreeMap<String, usize> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(v, &a)| (g.name(v).to_string(), a))
            .collect()
    }
}

/// Result of comparing `G(R⃗)` with `H(R⃗)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inclusion {
    pub holds: bool,
    /// Least tuple of `G(R⃗) \ H(R⃗)`, if any.
    pub counterexample: Option<Vec<usize>>,
}

/// Checks `rels` fit `g` and returns the common universe size.
fn validate(g: &LabeledGraph, rels: &[FinRelation]) -> Result<usize> {
    if rels.len() != g.label_count() {
        return Err(Error::ShapeMismatch(format!(
            "graph has {} labels but {} relations were given",
            g.label_count(),
            rels.len()
        )));
    }
    let size = rels[0].size();
    for r in rels {
        if r.size() != size {
            return Err(Error::UniverseMismatch {
                left: size,
                right: r.size(),
            });
        }
        if !r.is_reflexive() {
            return Err(Error::NotToleranceShaped("reflexive"));
        }
        if !r.is_symmetric() {
            return Err(Error::NotToleranceShaped("symmetric"));
        }
    }
    Ok(size)
}

/// Precomputed adjacency for repeated connection queries on one graph.
struct Connector<'a> {
    g: &'a LabeledGraph,
    rels: &'a [FinRelation],
    full: u64,
    // (neighbour, label) including both directions; loops dropped since all
    // relations are reflexive
    adj: Vec<Vec<(usize, usize)>>,
}

impl<'a> Connector<'a> {
    fn new(g: &'a LabeledGraph, rels: &'a [FinRelation], size: usize) -> Self {
        let mut adj = vec![Vec::new(); g.vertex_count()];
        for e in g.edges().iter().filter(|e| !e.is_loop()) {
            adj[e.u].push((e.v, e.label));
            adj[e.v].push((e.u, e.label));
        }
        let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        Connector { g, rels, full, adj }
    }

    fn restrict(&self, domains: &mut [u64], assigned: &[bool], v: usize, value: usize) -> bool {
        for &(w, label) in &self.adj[v] {
            if assigned[w] && w != v {
                if self.rels[label - 1].row(value) >> domains[w].trailing_zeros() & 1 == 0 {
                    return false;
                }
                continue;
            }
            domains[w] &= self.rels[label - 1].row(value);
            if domains[w] == 0 {
                return false;
            }
        }
        true
    }

    fn connect(&self, tuple: &[usize]) -> Option<Vec<usize>> {
        let nv = self.g.vertex_count();
        let mut domains = vec![self.full; nv];
        let mut assigned = vec![false; nv];
        for (&d, &a) in self.g.distinguished().iter().zip(tuple) {
            domains[d] &= 1 << a;
        }
        if domains.contains(&0) {
            return None;
        }
        let fixed: Vec<usize> = {
            let mut f = self.g.distinguished().to_vec();
            f.sort_unstable();
            f.dedup();
            f
        };
        for &d in &fixed {
            let value = domains[d].trailing_zeros() as usize;
            assigned[d] = true;
            if !self.restrict(&mut domains, &assigned, d, value) {
                return None;
            }
        }
        if self.search(&mut domains, &mut assigned) {
            Some(domains.iter().map(|d| d.trailing_zeros() as usize).collect())
        } else {
            None
        }
    }

    fn search(&self, domains: &mut Vec<u64>, assigned: &mut Vec<bool>) -> bool {
        let next = (0..domains.len())
            .filter(|&v| !assigned[v])
            .min_by_key(|&v| (domains[v].count_ones(), v));
        let Some(v) = next else {
            return true;
        };
        let mut candidates = domains[v];
        while candidates != 0 {
            let value = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let mut trial = domains.clone();
            trial[v] = 1 << value;
            assigned[v] = true;
            if self.restrict(&mut trial, assigned, v, value) && self.search(&mut trial, assigned) {
                *domains = trial;
                return true;
            }
            assigned[v] = false;
        }
        false
    }
}

/// Finds an assignment `c` with `c(dₖ) = aₖ` respecting every labeled edge, or
/// `None`. Smallest-domain-first vertex order, ascending values.
pub fn connect(
    g: &LabeledGraph,
    rels: &[FinRelation],
    tuple: &[usize],
) -> Result<Option<Connection>> {
    let size = validate(g, rels)?;
    if tuple.len() != g.arity() {
        return Err(Error::ShapeMismatch(format!(
            "graph has {} distinguished vertices but tuple has {} entries",
            g.arity(),
            tuple.len()
        )));
    }
    if let Some(&a) = tuple.iter().find(|&&a| a >= size) {
        return Err(Error::InvalidArgument(format!(
            "element {a} outside universe of size {size}"
        )));
    }
    Ok(Connector::new(g, rels, size)
        .connect(tuple)
        .map(|assignment| Connection { assignment }))
}

/// Every `h`-tuple over `{0, …, s-1}` in lexicographic order.
pub(crate) fn tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = size.pow(arity as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % size;
            code /= size;
        }
        t
    })
}

/// All tuples connectable by `g`, sorted.
pub fn relation(g: &LabeledGraph, rels: &[FinRelation]) -> Result<Vec<Vec<usize>>> {
    let size = validate(g, rels)?;
    let conn = Connector::new(g, rels, size);
    Ok(tuples(size, g.arity())
        .filter(|t| conn.connect(t).is_some())
        .collect())
}

/// Decides `G(R⃗) ⊆ H(R⃗)`.
pub fn check_inclusion(
    g: &LabeledGraph,
    h: &LabeledGraph,
    rels: &[FinRelation],
) -> Result<Inclusion> {
    check_inclusion_between(g, rels, h, rels)
}

/// Decides `G(R⃗) ⊆ H(S⃗)` where the two sides may use different relations,
/// as in `G(Θ⃗) ⊆ H(Θ₁^k₁, …)`.
pub fn check_inclusion_between(
    g: &LabeledGraph,
    g_rels: &[FinRelation],
    h: &LabeledGraph,
    h_rels: &[FinRelation],
) -> Result<Inclusion> {
    if g.label_count() != h.label_count() {
        return Err(Error::ShapeMismatch(format!(
            "label counts differ: {} vs {}",
            g.label_count(),
            h.label_count()
        )));
    }
    if g.arity() != h.arity() {
        return Err(Error::ShapeMismatch(format!(
            "distinguished counts differ: {} vs {}",
            g.arity(),
            h.arity()
        )));
    }
    let size = validate(g, g_rels)?;
    let h_size = validate(h, h_rels)?;
    if size != h_size {
        return Err(Error::UniverseMismatch {
            left: size,
            right: h_size,
        });
    }
    let left = Connector::new(g, g_rels, size);
    let right = Connector::new(h, h_rels, size);
    let counterexample =
        tuples(size, g.arity()).find(|t| left.connect(t).is_some() && right.connect(t).is_none());
    Ok(Inclusion {
        holds: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use crate::fixtures;
    use proptest::prelude::*;

    fn tol(size: usize, pairs: &[(usize, usize)]) -> FinRelation {
        FinRelation::tolerance_from_pairs(size, pairs.iter().copied()).unwrap()
    }

    /// Every assignment of the non-distinguished vertices, no pruning.
    fn brute_relation(g: &LabeledGraph, rels: &[FinRelation]) -> Vec<Vec<usize>> {
        let s = rels[0].size();
        let mut found = std::collections::BTreeSet::new();
        for c in tuples(s, g.vertex_count()) {
            if g.edges().iter().all(|e| rels[e.label - 1].contains(c[e.u], c[e.v])) {
                found.insert(g.distinguished().iter().map(|&d| c[d]).collect::<Vec<_>>());
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn single_edge_is_the_relation() {
        let g = LabeledGraph::with_default_names(2, 1, [(0, 1, 1)], vec![0, 1]).unwrap();
        let r = tol(4, &[(0, 1), (2, 3)]);
        for a in 0..4 {
            for b in 0..4 {
                let c = connect(&g, std::slice::from_ref(&r), &[a, b]).unwrap();
                assert_eq!(c.is_some(), r.contains(a, b));
            }
        }
        let rel = relation(&g, std::slice::from_ref(&r)).unwrap();
        let expect: Vec<Vec<usize>> = r.pairs().map(|(a, b)| vec![a, b]).collect();
        assert_eq!(rel, expect);
    }

    #[test]
    fn diagonal_forces_constant_on_components() {
        let d = FinRelation::identity(3).unwrap();
        let g = fixtures::perm_g();
        assert!(connect(&g, &[d.clone(), d.clone()], &[0, 1]).unwrap().is_none());
        assert!(connect(&g, &[d.clone(), d], &[2, 2]).unwrap().is_some());
    }

    #[test]
    fn perm_g_witness() {
        let r1 = tol(3, &[(0, 1)]);
        let r2 = tol(3, &[(1, 2)]);
        let g = fixtures::perm_g();
        let c = connect(&g, &[r1, r2], &[0, 2]).unwrap().unwrap();
        assert_eq!(c.assignment, vec![0, 1, 2]);
        let named = c.to_named(&g);
        assert_eq!(named["v2"], 1);
    }

    #[test]
    fn k4_with_full_relation_is_full() {
        let full = FinRelation::full(3).unwrap();
        let rel = relation(&fixtures::k4(), &[full]).unwrap();
        assert_eq!(rel.len(), 9);
        let alpha = FinRelation::from_partition(3, &[vec![0, 1]]).unwrap();
        let rel = relation(&fixtures::k4(), std::slice::from_ref(&alpha)).unwrap();
        assert_eq!(rel, brute_relation(&fixtures::k4(), std::slice::from_ref(&alpha)));
        let expect: Vec<Vec<usize>> = alpha.pairs().map(|(a, b)| vec![a, b]).collect();
        assert_eq!(rel, expect);
    }

    #[test]
    fn inclusion_examples() {
        let chain3 = FiniteAlgebra::chain(3);
        let a = chain3.generated_congruence(&[(0, 1)]).unwrap();
        let b = chain3.generated_congruence(&[(1, 2)]).unwrap();
        let g = fixtures::perm_g();
        let h = fixtures::perm_h();
        assert!(check_inclusion(&g, &g, &[a.clone(), b.clone()]).unwrap().holds);
        let res = check_inclusion(&g, &h, &[a.clone(), b.clone()]).unwrap();
        assert!(!res.holds);
        assert_eq!(res.counterexample, Some(vec![0, 2]));

        let empty = LabeledGraph::with_default_names(2, 2, [], vec![0, 1]).unwrap();
        assert!(check_inclusion(&g, &empty, &[a.clone(), b.clone()]).unwrap().holds);
        assert!(check_inclusion(&g, &fixtures::k4(), &[a, b]).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = fixtures::perm_g();
        let t = tol(3, &[(0, 1)]);
        let one_way = FinRelation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1)]).unwrap();
        let not_refl = FinRelation::from_pairs(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(
            connect(&g, &[t.clone(), one_way], &[0, 0]),
            Err(Error::NotToleranceShaped("symmetric"))
        );
        assert_eq!(
            connect(&g, &[t.clone(), not_refl], &[0, 0]),
            Err(Error::NotToleranceShaped("reflexive"))
        );
        assert!(connect(&g, std::slice::from_ref(&t), &[0, 0]).is_err());
        assert!(connect(&g, &[t.clone(), t.clone()], &[0]).is_err());
        assert!(connect(&g, &[t.clone(), t.clone()], &[0, 3]).is_err());
        assert!(connect(&g, &[t, tol(4, &[])], &[0, 0]).is_err());
    }

    #[test]
    fn repeated_distinguished_vertex() {
        let g = LabeledGraph::with_default_names(2, 1, [(0, 1, 1)], vec![0, 0]).unwrap();
        let r = FinRelation::full(2).unwrap();
        assert_eq!(relation(&g, &[r]).unwrap(), vec![vec![0, 0], vec![1, 1]]);
    }

    fn arb_graph() -> impl Strategy<Value = LabeledGraph> {
        (2usize..=5).prop_flat_map(|nv| {
            (
                proptest::collection::vec((0..nv, 0..nv, 1usize..=2), 0..7),
                proptest::collection::vec(0..nv, 2),
            )
                .prop_map(move |(edges, dist)| {
                    LabeledGraph::with_default_names(nv, 2, edges, dist).unwrap()
                })
        })
    }

    fn arb_tolerance(s: usize) -> impl Strategy<Value = FinRelation> {
        proptest::collection::vec(any::<bool>(), s * (s - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..s)
                .flat_map(|a| (a + 1..s).map(move |b| (a, b)))
                .zip(bits)
                .filter(|(_, on)| *on)
                .map(|(p, _)| p)
                .collect();
            FinRelation::tolerance_from_pairs(s, pairs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(g in arb_graph(), r1 in arb_tolerance(3), r2 in arb_tolerance(3)) {
            let rels = [r1, r2];
            prop_assert_eq!(relation(&g, &rels).unwrap(), brute_relation(&g, &rels));
        }

        #[test]
        fn diagonal_and_monotone(
            g in arb_graph(),
            r1 in arb_tolerance(4),
            r2 in arb_tolerance(4),
            extra in arb_tolerance(4),
        ) {
            let small = [r1.clone(), r2.clone()];
            let big = [r1.union_rel(&extra).unwrap(), r2];
            let lo = relation(&g, &small).unwrap();
            let hi = relation(&g, &big).unwrap();
            for a in 0..4 {
                prop_assert!(lo.contains(&vec![a, a]));
            }
            for t in &lo {
                prop_assert!(hi.contains(t));
            }
        }

        #[test]
        fn preserves_compatibility(g in arb_graph(), i in 0usize..4, j in 0usize..4) {
            let chain = FiniteAlgebra::chain(4);
            let cons = chain.congruences().unwrap();
            let rels = [cons[i % cons.len()].clone(), cons[j % cons.len()].clone()];
            let rel = relation(&g, &rels).unwrap();
            for op in chain.operations() {
                for x in &rel {
                    for y in &rel {
                        let z: Vec<usize> =
                            x.iter().zip(y).map(|(&a, &b)| op.apply(&[a, b])).collect();
                        prop_assert!(rel.contains(&z));
                    }
                }
            }
        }
    }
}
