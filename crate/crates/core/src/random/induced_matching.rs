//! Induced matchings in random bipartite graphs.
//!
//! Left vertices of degree one form `S`. Right vertices whose neighbors all lie
//! in `S` form `T`; among them, those with exactly one such neighbor form `T'`.
//! Pairing each vertex of `T'` with its neighbor gives a matching that is
//! induced in the whole graph.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedMatchingResult {
    pub s: VertexSet,
    pub t: VertexSet,
    pub t_prime: VertexSet,
    pub s_prime: VertexSet,
    /// `(left, right)` pairs, sorted by right endpoint.
    pub matching: Vec<(usize, usize)>,
}

/// `g` must be bipartite with left side `0..n_left` and right side `n_left..n`.
pub fn extract_induced_matching(g: &Graph, n_left: usize) -> Result<InducedMatchingResult> {
    let n = g.n();
    if n_left > n {
        return param(format!("left side {n_left} larger than n = {n}"));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| (u < n_left) == (v < n_left)) {
        return param(format!("edge ({u}, {v}) lies within one side"));
    }
    let s = VertexSet::from_iter(n, (0..n_left).filter(|&l| g.degree(l) == 1));
    let t = VertexSet::from_iter(n, (n_left..n).filter(|&r| g.neighbors(r).all(|l| s.contains(l))));
    let t_prime = VertexSet::from_iter(n, t.iter().filter(|&r| g.degree(r) == 1));
    let matching: Vec<(usize, usize)> = t_prime
        .iter()
        .map(|r| (g.neighbors(r).next().expect("degree one"), r))
        .collect();
    let s_prime = VertexSet::from_iter(n, matching.iter().map(|&(l, _)| l));
    if !verify_induced_matching(g, &matching) {
        return Err(Error::Invariant("extracted matching is not induced".into()));
    }
    Ok(InducedMatchingResult { s, t, t_prime, s_prime, matching })
}

/// True iff the edges are pairwise disjoint and `g` has no edge joining two
/// different matched pairs. Edges of `matching` must exist in `g`.
pub fn verify_induced_matching(g: &Graph, matching: &[(usize, usize)]) -> bool {
    let mut pair_of = vec![usize::MAX; g.n()];
    for (idx, &(u, v)) in matching.iter().enumerate() {
        if !g.has_edge(u, v) || pair_of[u] != usize::MAX || pair_of[v] != usize::MAX {
            return false;
        }
        pair_of[u] = idx;
        pair_of[v] = idx;
    }
    matching.iter().enumerate().all(|(idx, &(u, v))| {
        [u, v].into_iter().all(|x| {
            g.neighbors(x).all(|y| pair_of[y] == usize::MAX || pair_of[y] == idx)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::path;

    #[test]
    fn empty_bipartite() {
        let g = Graph::empty(10);
        let r = extract_induced_matching(&g, 5).unwrap();
        assert!(r.s.is_empty());
        assert!(r.matching.is_empty());
        // isolated right vertices trivially have no edges to L \ S
        assert_eq!(r.t.len(), 5);
    }

    #[test]
    fn perfect_matching_graph() {
        let g = Graph::from_edges(10, (0..5).map(|i| (i, i + 5))).unwrap();
        let r = extract_induced_matching(&g, 5).unwrap();
        assert_eq!(r.s.len(), 5);
        assert_eq!(r.t.len(), 5);
        assert_eq!(r.t_prime.len(), 5);
        assert_eq!(r.matching.len(), 5);
        assert_eq!(r.s_prime, r.s);
    }

    #[test]
    fn right_vertex_with_two_singletons_excluded() {
        // l0, l1 both only adjacent to r3; l2 adjacent to r4 only.
        let g = Graph::from_edges(5, [(0, 3), (1, 3), (2, 4)]).unwrap();
        let r = extract_induced_matching(&g, 3).unwrap();
        assert_eq!(r.t.to_vec(), vec![3, 4]);
        assert_eq!(r.t_prime.to_vec(), vec![4]);
        assert_eq!(r.matching, vec![(2, 4)]);
    }

    #[test]
    fn rejects_non_bipartite_layout() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        assert!(extract_induced_matching(&g, 2).is_err());
    }

    #[test]
    fn verify_examples() {
        let p4 = path(4);
        assert!(verify_induced_matching(&p4, &[]));
        assert!(verify_induced_matching(&p4, &[(1, 2)]));
        assert!(!verify_induced_matching(&p4, &[(0, 1), (2, 3)]));
        assert!(!verify_induced_matching(&p4, &[(0, 1), (1, 2)]));
        assert!(!verify_induced_matching(&p4, &[(0, 2)]));
    }
}
