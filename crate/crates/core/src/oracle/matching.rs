use rand::seq::SliceRandom;

use crate::{Graph, RngSeed, VertexSet};

/// Greedy maximal matching over the edges inside `alive`, scanned in an order
/// shuffled by `seed`.
pub fn greedy_maximal_matching(g: &Graph, alive: &VertexSet, seed: RngSeed) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g.edges_within(alive).collect();
    edges.shuffle(&mut seed.rng());
    let mut matched = VertexSet::empty(g.n());
    let mut out = Vec::new();
    for (u, v) in edges {
        if !matched.contains(u) && !matched.contains(v) {
            matched.insert(u);
            matched.insert(v);
            out.push((u.min(v), u.max(v)));
        }
    }
    out.sort_unstable();
    out
}

/// Endpoints of a matching; for a maximal matching this is a 2-approximate cover.
pub fn matching_endpoints(universe: usize, matching: &[(usize, usize)]) -> VertexSet {
    VertexSet::from_iter(universe, matching.iter().flat_map(|&(u, v)| [u, v]))
}

/// 2-approximate vertex cover of the whole graph.
pub fn two_approx_cover(g: &Graph, seed: RngSeed) -> VertexSet {
    matching_endpoints(g.n(), &greedy_maximal_matching(g, &g.vertex_set(), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn trivial_matchings() {
        assert!(greedy_maximal_matching(&Graph::empty(3), &VertexSet::full(3), RngSeed::new(0))
            .is_empty());
        assert_eq!(
            greedy_maximal_matching(&path(2), &VertexSet::full(2), RngSeed::new(0)),
            vec![(0, 1)]
        );
    }

    #[test]
    fn k4_always_two_edges() {
        for seed in 0..30 {
            let m = greedy_maximal_matching(&complete(4), &VertexSet::full(4), RngSeed::new(seed));
            assert_eq!(m.len(), 2);
        }
    }

    #[test]
    fn respects_alive() {
        let alive = VertexSet::from_iter(4, [0, 1]);
        let m = greedy_maximal_matching(&complete(4), &alive, RngSeed::new(1));
        assert_eq!(m, vec![(0, 1)]);
    }
}
