//! The sequential peeling baseline and the per-machine Local-Peeling routine.
//!
//! Both peel *simultaneously* within an iteration: the set removed at a
//! threshold is computed from the degrees at the start of that iteration.

use serde::Serialize;

use crate::cover::{CoverResult, Provenance};
use crate::error::{Error, Result};
use crate::schedule::{iterations_to_floor, log2n};
use crate::{Graph, VertexSet};

/// Alive-set peeling state with incrementally maintained degrees.
pub(crate) struct Peeler<'g> {
    g: &'g Graph,
    alive: VertexSet,
    degree: Vec<u32>,
}

impl<'g> Peeler<'g> {
    pub(crate) fn new(g: &'g Graph, alive: &VertexSet) -> Self {
        let mut degree = vec![0u32; g.n()];
        for v in alive.iter() {
            degree[v] = g.degree_within(v, alive) as u32;
        }
        Peeler { g, alive: alive.clone(), degree }
    }

    /// Alive vertices whose current degree satisfies `pick`.
    pub(crate) fn select(&self, pick: impl Fn(usize, usize) -> bool) -> VertexSet {
        let mut out = VertexSet::empty(self.g.n());
        for v in self.alive.iter() {
            if pick(v, self.degree[v] as usize) {
                out.insert(v);
            }
        }
        out
    }

    pub(crate) fn remove(&mut self, peeled: &VertexSet) {
        self.alive.difference_with(peeled);
        for v in peeled.iter() {
            for u in self.g.neighbors(v) {
                if self.alive.contains(u) {
                    self.degree[u] -= 1;
                }
            }
            self.degree[v] = 0;
        }
    }

    pub(crate) fn has_edges(&self) -> bool {
        self.alive.iter().any(|v| self.degree[v] > 0)
    }

    pub(crate) fn max_degree(&self) -> usize {
        self.alive.iter().map(|v| self.degree[v] as usize).max().unwrap_or(0)
    }
}

/// Sequential peeling: thresholds `n/2, n/4, …` for `t = 1..=⌈log₂ n⌉`, so the
/// last threshold is at most 1 and every surviving edge gets an endpoint peeled.
pub fn sequential_peel(g: &Graph) -> Result<CoverResult> {
    let n = g.n();
    let mut result = CoverResult::new(n);
    if n < 2 {
        return Ok(result);
    }
    let rounds = log2n(n).ceil() as usize;
    let mut peeler = Peeler::new(g, &g.vertex_set());
    for t in 1..=rounds {
        let threshold = n as f64 / 2f64.powi(t as i32);
        let peeled = peeler.select(|_, d| d > 0 && d as f64 >= threshold);
        peeler.remove(&peeled);
        result.extend(&peeled, Provenance::Sequential { iteration: t });
    }
    result.validate(g)?;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeelTrace {
    /// `P_t` for `t = 1..=t_max`, in order.
    pub peeled_per_iteration: Vec<VertexSet>,
    /// `delta / 2^(t+1)` for each iteration.
    pub thresholds: Vec<f64>,
    pub t_max: usize,
}

impl PeelTrace {
    pub fn peeled(&self, universe: usize) -> VertexSet {
        let mut all = VertexSet::empty(universe);
        for s in &self.peeled_per_iteration {
            all.union_with(s);
        }
        all
    }
}

/// Local-Peeling on `g` restricted to `alive`.
///
/// `t_max` is the smallest integer with `delta / 2^t_max ≤ c_scale·log₂ n`,
/// where `n` is the universe size of `g`. Iteration `t` peels every alive
/// vertex whose degree is at least `delta / 2^(t+1)`.
pub fn local_peel(g: &Graph, alive: &VertexSet, delta: f64, c_scale: f64) -> Result<PeelTrace> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    if alive.universe() != g.n() {
        return Err(Error::Parameter("alive set universe does not match graph".into()));
    }
    let t_max = if g.n() < 2 { 0 } else { iterations_to_floor(delta, c_scale * log2n(g.n())) };
    let mut peeler = Peeler::new(g, alive);
    let mut trace = PeelTrace {
        peeled_per_iteration: Vec::with_capacity(t_max),
        thresholds: Vec::with_capacity(t_max),
        t_max,
    };
    for t in 1..=t_max {
        let threshold = delta / 2f64.powi(t as i32 + 1);
        let peeled = peeler.select(|_, d| d as f64 >= threshold);
        peeler.remove(&peeled);
        trace.peeled_per_iteration.push(peeled);
        trace.thresholds.push(threshold);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn sequential_on_empty_graph() {
        let c = sequential_peel(&Graph::empty(10)).unwrap();
        assert_eq!(c.size, 0);
    }

    #[test]
    fn sequential_star_takes_center_only() {
        let c = sequential_peel(&star(15)).unwrap();
        assert_eq!(c.cover.to_vec(), vec![0]);
        assert_eq!(c.provenance[&0], Provenance::Sequential { iteration: 1 });
    }

    #[test]
    fn sequential_covers_non_power_of_two() {
        // n = 50 has no threshold exactly equal to 1; the last one is 50/64.
        let g = path(50);
        let c = sequential_peel(&g).unwrap();
        assert!(g.is_vertex_cover(&c.cover));
    }

    #[test]
    fn local_peel_empty_graph() {
        let g = Graph::empty(41);
        let tr = local_peel(&g, &VertexSet::full(41), 64.0, 4.0).unwrap();
        assert!(tr.peeled_per_iteration.iter().all(VertexSet::is_empty));
    }

    #[test]
    fn local_peel_star_center_first() {
        let g = star(40);
        let tr = local_peel(&g, &VertexSet::full(41), 64.0, 4.0).unwrap();
        // floor 4 log₂ 41 ≈ 21.4, so 64 → 32 → 16: t_max = 2
        assert_eq!(tr.t_max, 2);
        assert_eq!(tr.thresholds, vec![16.0, 8.0]);
        assert_eq!(tr.peeled_per_iteration[0].to_vec(), vec![0]);
        assert!(tr.peeled_per_iteration[1].is_empty());
    }

    #[test]
    fn local_peel_two_stars() {
        let g = Graph::from_edges(42, (1..=20).map(|v| (0, v)).chain((22..=41).map(|v| (21, v))))
            .unwrap();
        let tr = local_peel(&g, &VertexSet::full(42), 64.0, 4.0).unwrap();
        assert_eq!(tr.peeled_per_iteration[0].to_vec(), vec![0, 21]);
    }

    #[test]
    fn local_peel_is_simultaneous() {
        // In K_4 every vertex has degree 3 >= 2; all go at once, even though
        // after removing any one the others would drop to 2.
        let tr = local_peel(&complete(4), &VertexSet::full(4), 8.0, 0.5).unwrap();
        assert_eq!(tr.peeled_per_iteration[0].len(), 4);
    }

    #[test]
    fn local_peel_respects_alive_set() {
        let g = star(40);
        let alive = VertexSet::from_iter(41, 1..=40);
        let tr = local_peel(&g, &alive, 64.0, 4.0).unwrap();
        assert!(tr.peeled(41).is_empty());
    }

    #[test]
    fn local_peel_rejects_nonpositive_delta() {
        assert!(local_peel(&star(3), &VertexSet::full(4), 0.0, 4.0).is_err());
    }
}
