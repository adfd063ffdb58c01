//! MPC simulation of round-compressed parallel peeling.
//!
//! Machines are simulated in-process. Each compressed phase is charged
//! [`ROUNDS_PER_PHASE`] rounds (distribute, compute, collect); the final phase
//! costs [`ROUNDS_SINGLE_MACHINE`] rounds on one machine, or
//! [`ROUNDS_PER_FINAL_ITERATION`] rounds per sequential peeling iteration.
//! Memory is counted in vertices and edges held, not bytes.
//!
//! All randomness for machine `j` of phase `i` comes from the substream
//! `(i, j)` of the configured seed, so a trace does not depend on how rayon
//! schedules the machines.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{CoverResult, Provenance};
use crate::error::{param, Error, Result};
use crate::generate::sample_vertices;
use crate::oracle::matching::{greedy_maximal_matching, matching_endpoints};
use crate::peeling::{local_peel, Peeler};
use crate::rng::FINAL_PHASE_DOMAIN;
use crate::schedule::{log2n, make_schedule, max_thresholds, PhaseSchedule};
use crate::{Graph, RngSeed, VertexSet};

pub const ROUNDS_PER_PHASE: usize = 3;
pub const ROUNDS_SINGLE_MACHINE: usize = 2;
pub const ROUNDS_PER_FINAL_ITERATION: usize = 2;
pub const DEFAULT_C_SCALE: f64 = 4.0;
pub const DEFAULT_C_AUDIT: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalPhaseMode {
    /// Ship the residual graph to one machine and take a maximal matching.
    #[serde(alias = "single")]
    SingleMachine,
    /// Keep peeling sequentially from `Δ_τ` down to 1, a few rounds per iteration.
    #[serde(alias = "iterated")]
    IteratedPeeling,
}

impl FromStr for FinalPhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "single-machine" => Ok(FinalPhaseMode::SingleMachine),
            "iterated" | "iterated-peeling" => Ok(FinalPhaseMode::IteratedPeeling),
            other => param(format!("unknown final phase mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpcConfig {
    /// Memory per machine, in vertices plus edges.
    pub s: usize,
    pub c_scale: f64,
    pub seed: u64,
    pub final_phase_mode: FinalPhaseMode,
    /// Slack for the `s·log² n` capacity of the final single machine.
    pub c_audit: f64,
}

impl MpcConfig {
    /// Linear-memory configuration (`s = n`) with the default constants.
    pub fn linear(n: usize, seed: u64) -> Self {
        MpcConfig {
            s: n,
            c_scale: DEFAULT_C_SCALE,
            seed,
            final_phase_mode: FinalPhaseMode::SingleMachine,
            c_audit: DEFAULT_C_AUDIT,
        }
    }

    pub fn with_c_scale(mut self, c: f64) -> Self {
        self.c_scale = c;
        self
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    pub fn with_final_mode(mut self, mode: FinalPhaseMode) -> Self {
        self.final_phase_mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MachineLoad {
    pub phase: usize,
    #[serde(rename = "j")]
    pub machine: usize,
    #[serde(rename = "vertices")]
    pub vertices_held: usize,
    #[serde(rename = "edges")]
    pub edges_held: usize,
    pub rounds_used: usize,
    pub peeled: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseRecord {
    /// 1-based phase index.
    pub i: usize,
    pub delta: f64,
    pub delta_next: f64,
    pub p: f64,
    pub k: usize,
    pub local_iterations: usize,
    pub degenerate: bool,
    pub machines: Vec<MachineLoad>,
    /// Union of the Local-Peeling outputs.
    pub peeled: VertexSet,
    /// Vertices of degree above `Δ_{i+1}` removed after the machines report.
    pub cleanup_peeled: VertexSet,
    /// Vertices of `G` that no machine sampled this phase.
    pub unsampled: usize,
    /// Extra high-degree sweeps needed after the first. Always 0 unless there is a bug.
    pub resweeps: usize,
    pub edges_remaining: usize,
    pub rounds: usize,
}

impl PhaseRecord {
    /// `P_i`, including the high-degree cleanup.
    pub fn all_peeled(&self) -> VertexSet {
        self.peeled.union(&self.cleanup_peeled)
    }

    pub fn max_machine_edges(&self) -> usize {
        self.machines.iter().map(|m| m.edges_held).max().unwrap_or(0)
    }

    /// Total vertices plus edges held across all machines this phase.
    pub fn total_memory(&self) -> usize {
        self.machines.iter().map(|m| m.vertices_held + m.edges_held).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalPhaseRecord {
    pub mode: FinalPhaseMode,
    pub residual_vertices: usize,
    pub residual_edges: usize,
    pub residual_max_degree: usize,
    pub cover: VertexSet,
    pub iterations: usize,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpcTrace {
    pub n: usize,
    pub s: usize,
    pub c_scale: f64,
    pub seed: u64,
    pub schedule: PhaseSchedule,
    pub phases: Vec<PhaseRecord>,
    pub final_phase: FinalPhaseRecord,
    pub total_rounds: usize,
    pub cover_size: usize,
    pub max_edges_any_machine: usize,
    #[serde(rename = "cover")]
    pub final_cover: CoverResult,
}

impl MpcTrace {
    /// `P_1, …, P_{τ-1}` with cleanup included.
    pub fn peeled_per_phase(&self) -> Vec<VertexSet> {
        self.phases.iter().map(PhaseRecord::all_peeled).collect()
    }

    /// Alive set at the start of 0-based phase `i` (`i = phases()` gives the residual).
    pub fn alive_before_phase(&self, i: usize) -> VertexSet {
        let mut alive = VertexSet::full(self.n);
        for rec in &self.phases[..i] {
            alive.difference_with(&rec.all_peeled());
        }
        alive
    }
}

/// Runs Parallel-Peeling on `g`.
pub fn parallel_peel(g: &Graph, cfg: &MpcConfig) -> Result<MpcTrace> {
    let n = g.n();
    if n < 2 {
        return param(format!("the simulator needs n >= 2, got {n}"));
    }
    let schedule = make_schedule(n, cfg.s, cfg.c_scale)?;
    let seed = RngSeed::new(cfg.seed);
    let mut cover = CoverResult::new(n);
    let mut alive = VertexSet::full(n);
    let mut phases = Vec::with_capacity(schedule.phases());
    let mut total_rounds = 0;

    for i in 0..schedule.phases() {
        let (record, attribution) = run_phase(g, &schedule, i, seed, &alive)?;
        alive.difference_with(&record.peeled);
        alive.difference_with(&record.cleanup_peeled);
        for (v, machine) in attribution {
            cover.add(v, Provenance::Machine { phase: i + 1, machine });
        }
        cover.extend(&record.cleanup_peeled, Provenance::Cleanup { phase: i + 1 });
        total_rounds += record.rounds;
        phases.push(record);
    }

    let final_phase = match cfg.final_phase_mode {
        FinalPhaseMode::SingleMachine => {
            let capacity = memory_budget(n, cfg.s, cfg.c_audit);
            let picked =
                final_phase_single_machine(g, &alive, seed.stream(FINAL_PHASE_DOMAIN, 0), capacity)
                    .map_err(|e| match e {
                        Error::Capacity(msg) => Error::Capacity(format!(
                            "final phase after {} compressed phases: {msg}",
                            schedule.phases()
                        )),
                        other => other,
                    })?;
            let rounds = if picked.is_empty() { 0 } else { ROUNDS_SINGLE_MACHINE };
            residual_record(g, &alive, FinalPhaseMode::SingleMachine, picked, 1, rounds)
        }
        FinalPhaseMode::IteratedPeeling => {
            let (picked, iterations) = iterated_final(g, &alive, schedule.final_threshold())?;
            let rounds = iterations * ROUNDS_PER_FINAL_ITERATION;
            residual_record(g, &alive, FinalPhaseMode::IteratedPeeling, picked, iterations, rounds)
        }
    };
    total_rounds += final_phase.rounds;
    cover.extend(&final_phase.cover, Provenance::Final);
    cover.validate(g)?;

    let max_edges_any_machine = phases.iter().map(PhaseRecord::max_machine_edges).max().unwrap_or(0);
    Ok(MpcTrace {
        n,
        s: cfg.s,
        c_scale: cfg.c_scale,
        seed: cfg.seed,
        schedule,
        phases,
        cover_size: cover.size,
        final_phase,
        total_rounds,
        max_edges_any_machine,
        final_cover: cover,
    })
}

struct MachineOutput {
    load: MachineLoad,
    sampled: VertexSet,
    peeled: VertexSet,
}

fn machine_seed(seed: RngSeed, phase: usize, machine: usize) -> RngSeed {
    seed.stream(phase as u64 + 1, machine as u64 + 1)
}

fn run_machine(
    g: &Graph,
    schedule: &PhaseSchedule,
    phase: usize,
    machine: usize,
    seed: RngSeed,
    alive: &VertexSet,
) -> Result<MachineOutput> {
    let p = schedule.probabilities[phase];
    let sampled = sample_vertices(g.n(), p, machine_seed(seed, phase, machine));
    let held = sampled.intersection(alive);
    let sub = g.induced_subgraph(&held)?;
    let trace = local_peel(&sub, &held, schedule.local_delta(phase), schedule.c_scale)?;
    let peeled = trace.peeled(g.n());
    Ok(MachineOutput {
        load: MachineLoad {
            phase: phase + 1,
            machine: machine + 1,
            vertices_held: held.len(),
            edges_held: sub.m(),
            rounds_used: ROUNDS_PER_PHASE,
            peeled: peeled.len(),
        },
        sampled,
        peeled,
    })
}

fn run_phase(
    g: &Graph,
    schedule: &PhaseSchedule,
    i: usize,
    seed: RngSeed,
    alive: &VertexSet,
) -> Result<(PhaseRecord, Vec<(usize, usize)>)> {
    let n = g.n();
    let k = schedule.machine_counts[i];
    let outputs: Vec<MachineOutput> = (0..k)
        .into_par_iter()
        .map(|j| run_machine(g, schedule, i, j, seed, alive))
        .collect::<Result<_>>()?;

    let mut peeled = VertexSet::empty(n);
    let mut sampled = VertexSet::empty(n);
    let mut machines = Vec::with_capacity(k);
    // (vertex, lowest 1-based machine that peeled it)
    let mut attribution = Vec::new();
    for out in outputs {
        for v in out.peeled.iter().filter(|&v| !peeled.contains(v)) {
            attribution.push((v, out.load.machine));
        }
        peeled.union_with(&out.peeled);
        sampled.union_with(&out.sampled);
        machines.push(out.load);
    }

    let delta_next = schedule.thresholds[i + 1];
    let mut next_alive = alive.difference(&peeled);
    let mut cleanup = VertexSet::empty(n);
    let mut resweeps = 0;
    loop {
        // One simultaneous sweep; removals only lower degrees, so a second
        // sweep should never find anything.
        let over: VertexSet = VertexSet::from_iter(
            n,
            next_alive.iter().filter(|&v| g.degree_within(v, &next_alive) as f64 > delta_next),
        );
        if over.is_empty() {
            break;
        }
        if !cleanup.is_empty() {
            resweeps += 1;
            log::warn!("phase {}: high-degree sweep needed a repeat", i + 1);
        }
        next_alive.difference_with(&over);
        cleanup.union_with(&over);
    }
    debug_assert!(audit_phase_degree_invariant(g, &next_alive, delta_next));

    let record = PhaseRecord {
        i: i + 1,
        delta: schedule.thresholds[i],
        delta_next,
        p: schedule.probabilities[i],
        k,
        local_iterations: schedule.local_iterations[i],
        degenerate: schedule.degenerate[i],
        machines,
        peeled,
        cleanup_peeled: cleanup,
        unsampled: n - sampled.len(),
        resweeps,
        edges_remaining: g.edges_within(&next_alive).count(),
        rounds: ROUNDS_PER_PHASE,
    };
    Ok((record, attribution))
}

fn residual_record(
    g: &Graph,
    alive: &VertexSet,
    mode: FinalPhaseMode,
    cover: VertexSet,
    iterations: usize,
    rounds: usize,
) -> FinalPhaseRecord {
    let peeler = Peeler::new(g, alive);
    FinalPhaseRecord {
        mode,
        residual_vertices: alive.len(),
        residual_edges: g.edges_within(alive).count(),
        residual_max_degree: peeler.max_degree(),
        cover,
        iterations: if rounds == 0 { 0 } else { iterations },
        rounds,
    }
}

/// Vertex-plus-edge capacity `c_audit · s · log₂² n` used for the memory audit
/// and for admitting the residual graph onto one machine.
pub fn memory_budget(n: usize, s: usize, c_audit: f64) -> usize {
    let l = log2n(n.max(2));
    (c_audit * s as f64 * l * l).floor() as usize
}

/// Final phase on one machine: endpoints of a greedy maximal matching of the
/// residual graph, a 2-approximate cover of it.
pub fn final_phase_single_machine(
    g: &Graph,
    alive: &VertexSet,
    seed: RngSeed,
    capacity: usize,
) -> Result<VertexSet> {
    let edges = g.edges_within(alive).count();
    let load = alive.len() + edges;
    if load > capacity {
        return Err(Error::Capacity(format!(
            "residual graph needs {load} (vertices + edges) but one machine holds {capacity}"
        )));
    }
    Ok(matching_endpoints(g.n(), &greedy_maximal_matching(g, alive, seed)))
}

fn iterated_final(g: &Graph, alive: &VertexSet, delta_tau: f64) -> Result<(VertexSet, usize)> {
    let mut peeler = Peeler::new(g, alive);
    let mut picked = VertexSet::empty(g.n());
    if !peeler.has_edges() {
        return Ok((picked, 0));
    }
    let max_degree = peeler.max_degree();
    if max_degree as f64 > delta_tau {
        return Err(Error::Invariant(format!(
            "residual max degree {max_degree} exceeds the last threshold {delta_tau}"
        )));
    }
    let iterations = final_iterations(delta_tau);
    for t in 1..=iterations {
        let threshold = delta_tau / 2f64.powi(t as i32);
        let peeled = peeler.select(|_, d| d > 0 && d as f64 >= threshold);
        peeler.remove(&peeled);
        picked.union_with(&peeled);
    }
    Ok((picked, iterations))
}

/// `⌈log₂ Δ_τ⌉`, at least 1, so that the last threshold is at most 1.
pub fn final_iterations(delta_tau: f64) -> usize {
    (delta_tau.log2().ceil().max(1.0)) as usize
}

/// Final phase that keeps simulating sequential peeling from `Δ_τ` down to 1.
/// Returns the residual cover and the rounds charged (0 when no edges remain).
pub fn final_phase_iterated(
    g: &Graph,
    alive: &VertexSet,
    n: usize,
    s: usize,
    c_scale: f64,
) -> Result<(VertexSet, usize)> {
    let schedule = make_schedule(n, s, c_scale)?;
    let (picked, iterations) = iterated_final(g, alive, schedule.final_threshold())?;
    Ok((picked, iterations * ROUNDS_PER_FINAL_ITERATION))
}

/// True iff every alive vertex has at most `delta_next` alive neighbors.
pub fn audit_phase_degree_invariant(g: &Graph, alive: &VertexSet, delta_next: f64) -> bool {
    alive.iter().all(|v| g.degree_within(v, alive) as f64 <= delta_next)
}

/// True iff no machine held more than `c_audit · n · log₂² n` edges
/// (`c_audit · s · log₂² n` when `s < n`).
pub fn audit_memory(trace: &MpcTrace, n: usize, c_audit: f64) -> bool {
    let s = if trace.s >= n { n } else { trace.s };
    trace.max_edges_any_machine <= memory_budget(n, s, c_audit)
}

/// Round budget: `3·(⌈log₂ log₂ n⌉ + 2)` for the compressed phases plus the
/// final phase allowance (2 on one machine, `2·⌈log₂ Δ_τ⌉` when iterated).
pub fn round_budget(schedule: &PhaseSchedule, mode: FinalPhaseMode) -> usize {
    let phase_part = ROUNDS_PER_PHASE * max_thresholds(schedule.n);
    match mode {
        FinalPhaseMode::SingleMachine => phase_part + ROUNDS_SINGLE_MACHINE,
        FinalPhaseMode::IteratedPeeling => {
            phase_part + ROUNDS_PER_FINAL_ITERATION * final_iterations(schedule.final_threshold())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_gnp;
    use crate::graph::fixtures::*;

    #[test]
    fn empty_graph_gives_empty_cover() {
        let g = Graph::empty(64);
        let tr = parallel_peel(&g, &MpcConfig::linear(64, 1)).unwrap();
        assert_eq!(tr.cover_size, 0);
        assert_eq!(tr.max_edges_any_machine, 0);
        assert_eq!(tr.final_phase.rounds, 0);
    }

    #[test]
    fn gnp_4096_run_is_valid_and_deterministic() {
        let g = gen_gnp(4096, 0.02, RngSeed::new(11)).unwrap();
        let cfg = MpcConfig::linear(4096, 11).with_c_scale(2.0);
        let a = parallel_peel(&g, &cfg).unwrap();
        assert!(g.is_vertex_cover(&a.final_cover.cover));
        assert!(a.schedule.tau() <= 6);
        assert!(a.total_rounds <= round_budget(&a.schedule, cfg.final_phase_mode));
        let b = parallel_peel(&g, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_tiny_and_bad_memory() {
        assert!(parallel_peel(&Graph::empty(1), &MpcConfig::linear(1, 0)).is_err());
        let g = path(10);
        assert!(parallel_peel(&g, &MpcConfig::linear(10, 0).with_s(20)).is_err());
    }

    #[test]
    fn provenance_points_at_a_machine_that_peeled() {
        let g = gen_gnp(600, 0.05, RngSeed::new(3)).unwrap();
        let cfg = MpcConfig::linear(600, 5).with_c_scale(1.0);
        let tr = parallel_peel(&g, &cfg).unwrap();
        for (&v, src) in &tr.final_cover.provenance {
            match *src {
                Provenance::Machine { phase, machine } => {
                    let rec = &tr.phases[phase - 1];
                    assert!(rec.peeled.contains(v));
                    assert!(machine >= 1 && machine <= rec.k);
                    assert!(rec.machines[machine - 1].peeled > 0);
                }
                Provenance::Cleanup { phase } => {
                    assert!(tr.phases[phase - 1].cleanup_peeled.contains(v))
                }
                Provenance::Final => assert!(tr.final_phase.cover.contains(v)),
                Provenance::Sequential { .. } => panic!("not a sequential run"),
            }
        }
        assert_eq!(tr.final_cover.provenance.len(), tr.cover_size);
    }

    #[test]
    fn single_machine_final_examples() {
        let none = final_phase_single_machine(&Graph::empty(4), &VertexSet::full(4), RngSeed::new(0), 100)
            .unwrap();
        assert!(none.is_empty());
        let one = final_phase_single_machine(&path(2), &VertexSet::full(2), RngSeed::new(0), 100)
            .unwrap();
        assert_eq!(one.to_vec(), vec![0, 1]);
        for seed in 0..10 {
            let c = final_phase_single_machine(&path(4), &VertexSet::full(4), RngSeed::new(seed), 100)
                .unwrap();
            assert!(path(4).is_vertex_cover(&c));
            assert!(c.len() <= 4);
        }
    }

    #[test]
    fn single_machine_capacity_error() {
        let g = complete(10);
        let err = final_phase_single_machine(&g, &VertexSet::full(10), RngSeed::new(0), 20);
        assert!(matches!(err, Err(Error::Capacity(_))));
    }

    #[test]
    fn iterated_final_examples() {
        let (c, iters) = iterated_final(&Graph::empty(5), &VertexSet::full(5), 16.0).unwrap();
        assert!(c.is_empty());
        assert_eq!(iters, 0);
        let (c, iters) = iterated_final(&star(10), &VertexSet::full(11), 16.0).unwrap();
        assert_eq!(c.to_vec(), vec![0]);
        assert_eq!(iters, 4);
        assert!(iterated_final(&star(20), &VertexSet::full(21), 16.0).is_err());
    }

    #[test]
    fn degree_invariant_audit() {
        assert!(audit_phase_degree_invariant(&star(5), &VertexSet::empty(6), 0.0));
        assert!(!audit_phase_degree_invariant(&star(5), &VertexSet::full(6), 4.0));
        assert!(audit_phase_degree_invariant(&star(5), &VertexSet::full(6), 5.0));
    }

    #[test]
    fn memory_audit_flags_oversized_machine() {
        let g = gen_gnp(256, 0.05, RngSeed::new(1)).unwrap();
        let mut tr = parallel_peel(&g, &MpcConfig::linear(256, 1)).unwrap();
        assert!(audit_memory(&tr, 256, 16.0));
        tr.max_edges_any_machine = 256 * 256 * 256;
        assert!(!audit_memory(&tr, 256, 16.0));
    }
}
