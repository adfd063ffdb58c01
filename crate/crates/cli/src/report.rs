//! Report types. Everything here serializes deterministically: no timings,
//! no hash-ordered maps, runs sorted by seed.

use mpcvc::mpc::{FinalPhaseMode, MpcTrace};
use mpcvc::oracle::{PhaseVerdict, Violation};
use mpcvc::random::StatReport;
use mpcvc::Graph;
use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub runs: Vec<RunReport>,
    pub summary: Summary,
}

impl ExperimentReport {
    /// 0 when every hard audit passed and every statistical rate met its floor.
    pub fn exit_code(&self) -> i32 {
        if self.summary.pass {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphInfo {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
}

impl GraphInfo {
    pub fn of(g: &Graph) -> Self {
        GraphInfo { n: g.n(), m: g.m(), max_degree: g.max_degree() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmResult {
    pub algorithm: String,
    pub cover_size: usize,
    /// Cover size over the lower bound; 1 when both are zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundOracle {
    /// Branch and bound; the bound is `opt(G)` itself.
    Exact,
    /// Size of a greedy maximal matching, at most `opt(G)`.
    MaximalMatching,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    pub oracle: BoundOracle,
    pub ratio_label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseRow {
    pub i: usize,
    pub delta: f64,
    pub delta_next: f64,
    pub p: f64,
    pub k: usize,
    pub local_iterations: usize,
    pub degenerate: bool,
    pub alive_before: usize,
    pub peeled: usize,
    pub cleanup_peeled: usize,
    pub unsampled: usize,
    pub resweeps: usize,
    pub edges_remaining: usize,
    pub rounds: usize,
    pub max_machine_edges: usize,
    pub total_memory: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalRow {
    pub mode: FinalPhaseMode,
    pub delta: f64,
    pub residual_vertices: usize,
    pub residual_edges: usize,
    pub residual_max_degree: usize,
    pub cover_size: usize,
    pub iterations: usize,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpcSummary {
    pub s: usize,
    pub c_scale: f64,
    pub thresholds: Vec<f64>,
    pub total_rounds: usize,
    pub round_budget: usize,
    pub max_edges_any_machine: usize,
    pub memory_budget: usize,
    pub phases: Vec<PhaseRow>,
    pub final_phase: FinalRow,
}

impl MpcSummary {
    pub fn from_trace(tr: &MpcTrace, round_budget: usize, memory_budget: usize) -> Self {
        let mut alive = tr.n;
        let phases = tr
            .phases
            .iter()
            .map(|p| {
                let row = PhaseRow {
                    i: p.i,
                    delta: p.delta,
                    delta_next: p.delta_next,
                    p: p.p,
                    k: p.k,
                    local_iterations: p.local_iterations,
                    degenerate: p.degenerate,
                    alive_before: alive,
                    peeled: p.peeled.len(),
                    cleanup_peeled: p.cleanup_peeled.len(),
                    unsampled: p.unsampled,
                    resweeps: p.resweeps,
                    edges_remaining: p.edges_remaining,
                    rounds: p.rounds,
                    max_machine_edges: p.max_machine_edges(),
                    total_memory: p.total_memory(),
                };
                alive -= row.peeled + row.cleanup_peeled;
                row
            })
            .collect();
        let f = &tr.final_phase;
        MpcSummary {
            s: tr.s,
            c_scale: tr.c_scale,
            thresholds: tr.schedule.thresholds.clone(),
            total_rounds: tr.total_rounds,
            round_budget,
            max_edges_any_machine: tr.max_edges_any_machine,
            memory_budget,
            phases,
            final_phase: FinalRow {
                mode: f.mode,
                delta: tr.schedule.final_threshold(),
                residual_vertices: f.residual_vertices,
                residual_edges: f.residual_edges,
                residual_max_degree: f.residual_max_degree,
                cover_size: f.cover.len(),
                iterations: f.iterations,
                rounds: f.rounds,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichSummary {
    pub held: bool,
    /// Source of the reference cover `O*`: an optimum, or matching endpoints.
    pub reference_oracle: BoundOracle,
    pub reference_cover_size: usize,
    pub hypothetical_peeled: usize,
    pub hypothetical_iterations: usize,
    pub phases: Vec<PhaseVerdict>,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchingSummary {
    pub n_left: usize,
    pub n_right: usize,
    pub s_size: usize,
    pub t_size: usize,
    pub t_prime_size: usize,
    pub s_prime_size: usize,
    pub matching_size: usize,
    pub valid: bool,
    /// `E|S|` for the generator's parameters.
    pub s_expected: f64,
    pub s_band: f64,
    /// `0.8 · n_left / e³`, meaningful for `p = 1/n_right`.
    pub matching_floor: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditKind {
    /// Must pass on every run; a failure fails the process.
    Hard,
    /// Holds with high probability; only its rate across runs is judged.
    Statistical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Audit {
    pub name: String,
    pub kind: AuditKind,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Audit {
    pub fn hard(name: &str, pass: bool) -> Self {
        Audit { name: name.into(), kind: AuditKind::Hard, pass, detail: None }
    }

    pub fn statistical(name: &str, pass: bool) -> Self {
        Audit { name: name.into(), kind: AuditKind::Statistical, pass, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub graph: Option<GraphInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<AlgorithmResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<LowerBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mpc: Option<MpcSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<SandwichSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub induced_matching: Option<MatchingSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub concentration: Vec<StatReport>,
    pub audits: Vec<Audit>,
}

impl RunReport {
    pub fn new(seed: u64, graph: Option<&Graph>) -> Self {
        RunReport {
            seed,
            graph: graph.map(GraphInfo::of),
            results: Vec::new(),
            lower_bound: None,
            mpc: None,
            sandwich: None,
            induced_matching: None,
            concentration: Vec::new(),
            audits: Vec::new(),
        }
    }

    pub fn hard_audits_passed(&self) -> bool {
        self.audits.iter().filter(|a| a.kind == AuditKind::Hard).all(|a| a.pass)
    }

    pub fn result(&self, algorithm: &str) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == algorithm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRate {
    pub name: String,
    pub kind: AuditKind,
    pub passed: usize,
    pub total: usize,
    pub rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
    pub pass: bool,
}

/// Per-`s` aggregate of a memory sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepGroup {
    pub s: usize,
    pub runs: usize,
    pub max_rounds: usize,
    pub round_budget: usize,
    pub max_edges: usize,
    pub memory_budget: usize,
    pub runs_within_rounds: usize,
    pub runs_within_memory: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub hard_audits_passed: bool,
    pub rates: Vec<AuditRate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<SweepGroup>,
    pub pass: bool,
}
