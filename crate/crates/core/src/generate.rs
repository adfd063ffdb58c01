//! Random graph generators.
//!
//! Both generators walk the candidate pairs in a fixed order and jump between
//! successes with geometric skips, so each pair is still an independent
//! Bernoulli(p) trial but the cost is proportional to the number of edges.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{param, Result};
use crate::{Graph, RngSeed, VertexSet};

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return param(format!("probability {p} outside [0, 1]"));
    }
    Ok(())
}

/// Indices in `0..total` chosen independently with probability `p`, ascending.
pub(crate) fn bernoulli_indices(total: u64, p: f64, rng: &mut impl Rng) -> Vec<u64> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let skip = Geometric::new(p).expect("p in (0, 1)");
    let mut out = Vec::with_capacity(((total as f64) * p * 1.1) as usize + 8);
    let mut next = skip.sample(rng);
    while next < total {
        out.push(next);
        next = match next.checked_add(1 + skip.sample(rng)) {
            Some(x) => x,
            None => break,
        };
    }
    out
}

/// Each vertex of `0..n` kept independently with probability `p`.
pub fn sample_vertices(n: usize, p: f64, seed: RngSeed) -> VertexSet {
    let mut rng = seed.rng();
    VertexSet::from_iter(n, bernoulli_indices(n as u64, p, &mut rng).into_iter().map(|i| i as usize))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, seed: RngSeed) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seed.rng();
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let edges: Vec<(usize, usize)> = bernoulli_indices(pairs, p, &mut rng)
        .into_iter()
        .map(pair_from_index)
        .collect();
    Ok(Graph::from_unique_edges(n, &edges))
}

/// Inverse of the enumeration (0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...
/// i.e. pairs `(u, v)` with `u < v` ordered by `v` then `u`.
fn pair_from_index(idx: u64) -> (usize, usize) {
    // v is the largest integer with v (v - 1) / 2 <= idx.
    let mut v = ((1.0 + (1.0 + 8.0 * idx as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    let u = idx - v * (v - 1) / 2;
    (u as usize, v as usize)
}

/// Random bipartite graph: left ids `0..n_left`, right ids
/// `n_left..n_left + n_right`, each left-right pair an edge with probability `p`.
pub fn gen_bipartite_gnp(n_left: usize, n_right: usize, p: f64, seed: RngSeed) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seed.rng();
    let pairs = n_left as u64 * n_right as u64;
    let edges: Vec<(usize, usize)> = bernoulli_indices(pairs, p, &mut rng)
        .into_iter()
        .map(|idx| {
            let l = (idx / n_right as u64) as usize;
            let r = (idx % n_right as u64) as usize;
            (l, n_left + r)
        })
        .collect();
    Ok(Graph::from_unique_edges(n_left + n_right, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_enumeration() {
        let mut idx = 0;
        for v in 1..60u64 {
            for u in 0..v {
                assert_eq!(pair_from_index(idx), (u as usize, v as usize));
                idx += 1;
            }
        }
        // far out, where f64 sqrt rounding matters
        let v: u64 = 3_000_000;
        let base = v * (v - 1) / 2;
        assert_eq!(pair_from_index(base), (0, v as usize));
        assert_eq!(pair_from_index(base + v - 1), ((v - 1) as usize, v as usize));
    }

    #[test]
    fn gnp_extremes() {
        let g = gen_gnp(4, 0.0, RngSeed::new(1)).unwrap();
        assert_eq!(g.m(), 0);
        let g = gen_gnp(4, 1.0, RngSeed::new(1)).unwrap();
        assert_eq!(g.m(), 6);
        assert!(gen_gnp(4, 1.5, RngSeed::new(1)).is_err());
        assert!(gen_gnp(4, -0.1, RngSeed::new(1)).is_err());
        assert_eq!(gen_gnp(0, 0.5, RngSeed::new(1)).unwrap().m(), 0);
        assert_eq!(gen_gnp(1, 0.5, RngSeed::new(1)).unwrap().m(), 0);
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = gen_gnp(300, 0.05, RngSeed::new(9)).unwrap();
        let b = gen_gnp(300, 0.05, RngSeed::new(9)).unwrap();
        let c = gen_gnp(300, 0.05, RngSeed::new(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn bipartite_extremes() {
        let g = gen_bipartite_gnp(3, 3, 1.0, RngSeed::new(0)).unwrap();
        assert_eq!(g.m(), 9);
        let g = gen_bipartite_gnp(2, 2, 0.0, RngSeed::new(0)).unwrap();
        assert_eq!(g.m(), 0);
        assert!(gen_bipartite_gnp(2, 2, 2.0, RngSeed::new(0)).is_err());
    }

    #[test]
    fn bipartite_sides_never_touch_themselves() {
        for seed in 0..20 {
            let g = gen_bipartite_gnp(50, 70, 0.1, RngSeed::new(seed)).unwrap();
            for (u, v) in g.edges() {
                assert!(u < 50 && v >= 50, "edge ({u}, {v}) crosses no partition");
            }
        }
    }

    #[test]
    fn sample_vertices_extremes() {
        assert_eq!(sample_vertices(10, 1.0, RngSeed::new(0)).len(), 10);
        assert_eq!(sample_vertices(10, 0.0, RngSeed::new(0)).len(), 0);
    }
}
