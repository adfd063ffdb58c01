//! The analysis-only peeling process that knows a fixed vertex cover `O*`.
//!
//! It runs on `H_1`, the graph with all edges inside `O*` deleted, and peels
//! `O*` vertices at threshold `Δ_i / 2^t` and the rest at the lower threshold
//! `Δ_i / 2^(t+2)`, both computed against the same `H_{i,t}`. Phase `i` runs
//! as many iterations as Local-Peeling does in that phase.

use serde::Serialize;

use crate::error::{param, Result};
use crate::peeling::Peeler;
use crate::schedule::PhaseSchedule;
use crate::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypotheticalPhase {
    pub i: usize,
    /// `O_{i,t}` for each iteration.
    pub o_per_iteration: Vec<VertexSet>,
    /// `Ō_{i,t}` for each iteration.
    pub obar_per_iteration: Vec<VertexSet>,
    pub o_thresholds: Vec<f64>,
    pub obar_thresholds: Vec<f64>,
    pub o_union: VertexSet,
    pub obar_union: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypotheticalTrace {
    pub opt_cover: VertexSet,
    pub schedule: PhaseSchedule,
    pub phases: Vec<HypotheticalPhase>,
}

impl HypotheticalTrace {
    pub fn total_iterations(&self) -> usize {
        self.phases.iter().map(|p| p.o_per_iteration.len()).sum()
    }

    /// `⋃_i (O_i ∪ Ō_i)`.
    pub fn peeled_union(&self) -> VertexSet {
        let mut all = VertexSet::empty(self.opt_cover.universe());
        for p in &self.phases {
            all.union_with(&p.o_union);
            all.union_with(&p.obar_union);
        }
        all
    }

    /// Vertices alive in `H_{i,t}` (1-based `phase` and `iteration`).
    /// `iteration = 1` is the start of the phase.
    pub fn residual_alive(&self, phase: usize, iteration: usize) -> VertexSet {
        let mut alive = VertexSet::full(self.opt_cover.universe());
        for p in &self.phases[..phase - 1] {
            alive.difference_with(&p.o_union);
            alive.difference_with(&p.obar_union);
        }
        let p = &self.phases[phase - 1];
        for t in 0..iteration - 1 {
            alive.difference_with(&p.o_per_iteration[t]);
            alive.difference_with(&p.obar_per_iteration[t]);
        }
        alive
    }
}

/// `H_1`: `g` without the edges that have both endpoints in `cover`.
pub fn bipartite_base(g: &Graph, cover: &VertexSet) -> Graph {
    let edges: Vec<(usize, usize)> =
        g.edges().filter(|&(u, v)| !(cover.contains(u) && cover.contains(v))).collect();
    Graph::from_unique_edges(g.n(), &edges)
}

pub fn hypothetical_process(
    g: &Graph,
    opt_cover: &VertexSet,
    schedule: &PhaseSchedule,
) -> Result<HypotheticalTrace> {
    if schedule.n != g.n() || opt_cover.universe() != g.n() {
        return param("graph, cover and schedule disagree on n");
    }
    if let Some((u, v)) = g.uncovered_edge(opt_cover) {
        return param(format!("O* is not a vertex cover: edge ({u}, {v}) uncovered"));
    }
    let h1 = bipartite_base(g, opt_cover);
    let mut peeler = Peeler::new(&h1, &VertexSet::full(g.n()));
    let mut phases = Vec::with_capacity(schedule.phases());
    for i in 0..schedule.phases() {
        let delta = schedule.thresholds[i];
        let iterations = schedule.local_iterations[i];
        let mut phase = HypotheticalPhase {
            i: i + 1,
            o_per_iteration: Vec::with_capacity(iterations),
            obar_per_iteration: Vec::with_capacity(iterations),
            o_thresholds: Vec::with_capacity(iterations),
            obar_thresholds: Vec::with_capacity(iterations),
            o_union: VertexSet::empty(g.n()),
            obar_union: VertexSet::empty(g.n()),
        };
        for t in 1..=iterations {
            let o_thr = delta / 2f64.powi(t as i32);
            let obar_thr = delta / 2f64.powi(t as i32 + 2);
            let picked = peeler.select(|v, d| {
                d > 0 && d as f64 >= if opt_cover.contains(v) { o_thr } else { obar_thr }
            });
            peeler.remove(&picked);
            let o = picked.intersection(opt_cover);
            let obar = picked.difference(opt_cover);
            phase.o_union.union_with(&o);
            phase.obar_union.union_with(&obar);
            phase.o_per_iteration.push(o);
            phase.obar_per_iteration.push(obar);
            phase.o_thresholds.push(o_thr);
            phase.obar_thresholds.push(obar_thr);
        }
        phases.push(phase);
    }
    Ok(HypotheticalTrace { opt_cover: opt_cover.clone(), schedule: schedule.clone(), phases })
}

/// `|⋃ O_i ∪ Ō_i| ≤ (8·(iterations) + 1)·opt_size`: at most `8·opt` per
/// `Ō_{i,t}` and at most `opt` for all of the `O` side together.
pub fn hypothetical_size_bound(trace: &HypotheticalTrace, opt_size: usize) -> bool {
    let bound = (8 * trace.total_iterations() + 1) * opt_size;
    trace.peeled_union().len() <= bound
}

/// `|Ō_{i,t}| ≤ 8·|cover|` for every phase and iteration.
pub fn per_iteration_bound_holds(trace: &HypotheticalTrace, cover_size: usize) -> bool {
    trace
        .phases
        .iter()
        .flat_map(|p| &p.obar_per_iteration)
        .all(|s| s.len() <= 8 * cover_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::schedule::make_schedule;

    #[test]
    fn empty_graph() {
        let g = Graph::empty(64);
        let sch = make_schedule(64, 64, 2.0).unwrap();
        let tr = hypothetical_process(&g, &VertexSet::empty(64), &sch).unwrap();
        assert!(tr.peeled_union().is_empty());
        assert!(hypothetical_size_bound(&tr, 0));
    }

    #[test]
    fn star_center_first_iteration() {
        let g = star(63);
        let sch = make_schedule(64, 64, 2.0).unwrap();
        let cover = VertexSet::from_iter(64, [0]);
        let tr = hypothetical_process(&g, &cover, &sch).unwrap();
        assert_eq!(tr.phases[0].o_per_iteration[0].to_vec(), vec![0]);
        assert!(tr.phases.iter().all(|p| p.obar_union.is_empty()));
        assert_eq!(tr.peeled_union().len(), 1);
        assert!(hypothetical_size_bound(&tr, 1));
    }

    #[test]
    fn rejects_non_cover() {
        let g = path(64);
        let sch = make_schedule(64, 64, 2.0).unwrap();
        assert!(hypothetical_process(&g, &VertexSet::empty(64), &sch).is_err());
    }

    #[test]
    fn base_graph_drops_cover_internal_edges() {
        let g = complete(4);
        let cover = VertexSet::from_iter(4, [0, 1, 2]);
        let h = bipartite_base(&g, &cover);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 3), (2, 3)]);
    }

    #[test]
    fn residual_reconstruction() {
        let g = star(63);
        let sch = make_schedule(64, 64, 2.0).unwrap();
        let tr = hypothetical_process(&g, &VertexSet::from_iter(64, [0]), &sch).unwrap();
        assert!(tr.residual_alive(1, 1).contains(0));
        assert!(!tr.residual_alive(1, 2).contains(0));
    }
}
