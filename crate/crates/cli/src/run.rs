//! Experiment pipelines, one per command.

use std::collections::BTreeMap;
use std::f64::consts::E;
use std::fs::File;
use std::io::BufReader;

use log::info;
use mpcvc::mpc::{audit_phase_degree_invariant, memory_budget, round_budget, MpcConfig, MpcTrace};
use mpcvc::oracle::{
    exact_min_vc_with_limit, greedy_maximal_matching, hypothetical_process,
    hypothetical_size_bound, per_iteration_bound_holds, sandwich_audit, two_approx_cover,
};
use mpcvc::random::{
    assign_balls, bounded_differences_bound, chernoff_bound, deviation_band, empirical_tail,
    expected_singletons, extract_induced_matching, singletons_in, verify_induced_matching,
    StatReport,
};
use mpcvc::rng::GENERATOR_DOMAIN;
use mpcvc::{gen_bipartite_gnp, gen_gnp, parallel_peel, sequential_peel, Graph, RngSeed, VertexSet};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{Command, ExperimentConfig, GenSpec, GraphSource};
use crate::error::{CliError, Result};
use crate::report::*;

/// Substream of the run seed for the reference cover used by the sandwich audit.
const REFERENCE_COVER_STREAM: u64 = 1;
/// Substream for the matching that lower-bounds `opt` on large graphs.
const LOWER_BOUND_STREAM: u64 = 2;

const PARALLEL: &str = "parallel";
const SEQUENTIAL: &str = "sequential";

enum Input {
    Fixed(Graph),
    Generated(GenSpec),
    None,
}

impl Input {
    fn load(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(match &cfg.graph {
            Some(GraphSource::File(path)) => {
                let file = File::open(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                let g = Graph::read_edge_list(BufReader::new(file))
                    .map_err(|source| CliError::Graph { path: path.clone(), source })?;
                Input::Fixed(g)
            }
            Some(GraphSource::Generator(spec)) => Input::Generated(*spec),
            None => Input::None,
        })
    }

    fn graph(&self, seed: u64) -> Result<Option<Graph>> {
        let rng = RngSeed::new(seed);
        Ok(match self {
            Input::Fixed(g) => Some(g.clone()),
            Input::Generated(GenSpec::Gnp { n, p }) => Some(gen_gnp(*n, *p, rng)?),
            Input::Generated(GenSpec::Bipartite { n_left, n_right, p }) => {
                Some(gen_bipartite_gnp(*n_left, *n_right, *p, rng)?)
            }
            Input::None => None,
        })
    }
}

/// Runs `cfg` on a dedicated pool with `threads` workers (rayon's default when `None`).
pub fn run_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

/// Runs every seed of `cfg` (concurrently) and aggregates the runs in seed
/// order. A memory sweep lists all seeds for the first `s`, then the next.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let input = Input::load(cfg)?;
    info!("{} over seeds {}", cfg.command, cfg.seeds);
    let per_seed: Vec<Result<Vec<RunReport>>> = cfg
        .seeds
        .seeds()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|seed| {
            let g = input.graph(seed)?;
            run_seed(cfg, g.as_ref(), seed).map_err(|e| match e {
                CliError::Core(source) => CliError::Run { seed, source },
                other => other,
            })
        })
        .collect();
    let per_seed = per_seed.into_iter().collect::<Result<Vec<_>>>()?;
    let width = per_seed.iter().map(Vec::len).max().unwrap_or(0);
    let mut runs = Vec::with_capacity(per_seed.len() * width);
    for k in 0..width {
        runs.extend(per_seed.iter().filter_map(|rs| rs.get(k).cloned()));
    }
    let summary = summarize(cfg, &runs);
    Ok(ExperimentReport { config: cfg.clone(), runs, summary })
}

fn run_seed(cfg: &ExperimentConfig, g: Option<&Graph>, seed: u64) -> Result<Vec<RunReport>> {
    let need = || g.expect("config validation guarantees a graph");
    Ok(match cfg.command {
        Command::RunParallel => vec![run_parallel(cfg, need(), seed, None)?],
        Command::RunSequential => vec![run_sequential(cfg, need(), seed)?],
        Command::Compare => vec![run_compare(cfg, need(), seed)?],
        Command::Sandwich => vec![run_sandwich(cfg, need(), seed)?],
        Command::MemorySweep => sweep_memories(cfg, need().n())
            .into_iter()
            .map(|s| run_parallel(cfg, need(), seed, Some(s)))
            .collect::<Result<_>>()?,
        Command::AppendixMatching => match cfg.graph {
            Some(GraphSource::Generator(GenSpec::Bipartite { n_left, n_right, p })) => {
                vec![run_matching(need(), n_left, n_right, p, seed)?]
            }
            _ => unreachable!("config validation requires a bipartite generator"),
        },
        Command::AppendixConcentration => vec![run_concentration(cfg, seed)],
    })
}

/// Distinct `s = round(n^e)` values, in exponent order, clamped to `[2, n]`.
pub fn sweep_memories(cfg: &ExperimentConfig, n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &e in &cfg.s_exponents {
        let s = ((n as f64).powf(e).round() as usize).clamp(2, n.max(2));
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn lower_bound(cfg: &ExperimentConfig, g: &Graph, seed: u64) -> Result<LowerBound> {
    match exact_min_vc_with_limit(g, cfg.exact_limit) {
        Ok(opt) => Ok(LowerBound {
            value: opt.len(),
            oracle: BoundOracle::Exact,
            ratio_label: "ratio vs exact optimum".into(),
        }),
        Err(mpcvc::Error::Refused(_)) => {
            let rng = RngSeed::new(seed).stream(GENERATOR_DOMAIN, LOWER_BOUND_STREAM);
            let m = greedy_maximal_matching(g, &g.vertex_set(), rng);
            Ok(LowerBound {
                value: m.len(),
                oracle: BoundOracle::MaximalMatching,
                ratio_label: "upper estimate of true ratio".into(),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn ratio(cover: usize, bound: usize) -> f64 {
    if bound == 0 {
        // an edgeless graph: both peelers return the empty cover
        if cover == 0 { 1.0 } else { f64::INFINITY }
    } else {
        cover as f64 / bound as f64
    }
}

fn cover_audit(name: &str, g: &Graph, cover: &VertexSet) -> Audit {
    match g.uncovered_edge(cover) {
        None => Audit::hard(name, true),
        Some((u, v)) => Audit::hard(name, false).with_detail(format!("edge ({u}, {v}) uncovered")),
    }
}

fn mpc_audits(g: &Graph, tr: &MpcTrace, mode_budget: usize, mem_budget: usize) -> Vec<Audit> {
    let mut audits = vec![cover_audit("parallel_cover_valid", g, &tr.final_cover.cover)];
    let mut alive = VertexSet::full(g.n());
    let mut failed = None;
    for p in &tr.phases {
        alive.difference_with(&p.all_peeled());
        if failed.is_none() && !audit_phase_degree_invariant(g, &alive, p.delta_next) {
            failed = Some(p.i);
        }
    }
    let mut degree = Audit::hard("phase_degree_invariant", failed.is_none());
    if let Some(i) = failed {
        degree = degree.with_detail(format!("degree above the next threshold after phase {i}"));
    }
    audits.push(degree);
    audits.push(
        Audit::hard("round_budget", tr.total_rounds <= mode_budget)
            .with_detail(format!("{} of {mode_budget} rounds", tr.total_rounds)),
    );
    audits.push(
        Audit::statistical("memory_budget", tr.max_edges_any_machine <= mem_budget)
            .with_detail(format!("{} of {mem_budget} edges", tr.max_edges_any_machine)),
    );
    audits
}

fn parallel_trace(cfg: &ExperimentConfig, g: &Graph, seed: u64, s: Option<usize>) -> Result<(MpcTrace, MpcSummary, Vec<Audit>)> {
    let (s, mode) = cfg.memory_for(g.n(), s)?;
    let mpc_cfg = MpcConfig::linear(g.n(), seed).with_s(s).with_c_scale(cfg.c_scale).with_final_mode(mode);
    let mpc_cfg = MpcConfig { c_audit: cfg.c_audit, ..mpc_cfg };
    let tr = parallel_peel(g, &mpc_cfg)?;
    let rounds = round_budget(&tr.schedule, mode);
    let memory = memory_budget(g.n(), s, cfg.c_audit);
    let audits = mpc_audits(g, &tr, rounds, memory);
    let summary = MpcSummary::from_trace(&tr, rounds, memory);
    Ok((tr, summary, audits))
}

fn run_parallel(cfg: &ExperimentConfig, g: &Graph, seed: u64, s: Option<usize>) -> Result<RunReport> {
    let mut run = RunReport::new(seed, Some(g));
    let (tr, summary, audits) = parallel_trace(cfg, g, seed, s)?;
    run.mpc = Some(summary);
    run.audits = audits;
    if cfg.command == Command::MemorySweep {
        run.results.push(AlgorithmResult { algorithm: PARALLEL.into(), cover_size: tr.cover_size, ratio: None });
        return Ok(run);
    }
    let lb = lower_bound(cfg, g, seed)?;
    run.results.push(AlgorithmResult {
        algorithm: PARALLEL.into(),
        cover_size: tr.cover_size,
        ratio: Some(ratio(tr.cover_size, lb.value)),
    });
    run.lower_bound = Some(lb);
    Ok(run)
}

fn run_sequential(cfg: &ExperimentConfig, g: &Graph, seed: u64) -> Result<RunReport> {
    let mut run = RunReport::new(seed, Some(g));
    let seq = sequential_peel(g)?;
    let lb = lower_bound(cfg, g, seed)?;
    run.audits.push(cover_audit("sequential_cover_valid", g, &seq.cover));
    run.results.push(AlgorithmResult {
        algorithm: SEQUENTIAL.into(),
        cover_size: seq.size,
        ratio: Some(ratio(seq.size, lb.value)),
    });
    run.lower_bound = Some(lb);
    Ok(run)
}

fn run_compare(cfg: &ExperimentConfig, g: &Graph, seed: u64) -> Result<RunReport> {
    let mut run = run_parallel(cfg, g, seed, None)?;
    let seq = sequential_peel(g)?;
    let bound = run.lower_bound.as_ref().map_or(0, |lb| lb.value);
    run.audits.push(cover_audit("sequential_cover_valid", g, &seq.cover));
    run.results.push(AlgorithmResult {
        algorithm: SEQUENTIAL.into(),
        cover_size: seq.size,
        ratio: Some(ratio(seq.size, bound)),
    });
    Ok(run)
}

fn run_sandwich(cfg: &ExperimentConfig, g: &Graph, seed: u64) -> Result<RunReport> {
    let mut run = RunReport::new(seed, Some(g));
    let (tr, summary, audits) = parallel_trace(cfg, g, seed, None)?;
    run.results.push(AlgorithmResult { algorithm: PARALLEL.into(), cover_size: tr.cover_size, ratio: None });
    run.mpc = Some(summary);
    run.audits = audits;

    let (reference, reference_oracle) = match exact_min_vc_with_limit(g, cfg.exact_limit) {
        Ok(opt) => (opt, BoundOracle::Exact),
        Err(mpcvc::Error::Refused(_)) => {
            let rng = RngSeed::new(seed).stream(GENERATOR_DOMAIN, REFERENCE_COVER_STREAM);
            (two_approx_cover(g, rng), BoundOracle::MaximalMatching)
        }
        Err(e) => return Err(e.into()),
    };
    let hyp = hypothetical_process(g, &reference, &tr.schedule)?;
    let report = sandwich_audit(&tr, &hyp)?;
    run.audits.push(Audit::hard("hypothetical_size_bound", hypothetical_size_bound(&hyp, reference.len())));
    run.audits.push(Audit::hard("hypothetical_per_iteration", per_iteration_bound_holds(&hyp, reference.len())));
    let mut sandwich = Audit::statistical("sandwich", report.held());
    if let Some(v) = &report.violation {
        sandwich = sandwich.with_detail(format!("phase {} side {:?} vertex {}", v.phase, v.side, v.witness_vertex));
    }
    run.audits.push(sandwich);
    run.sandwich = Some(SandwichSummary {
        held: report.held(),
        reference_oracle,
        reference_cover_size: reference.len(),
        hypothetical_peeled: hyp.peeled_union().len(),
        hypothetical_iterations: hyp.total_iterations(),
        phases: report.phases,
        violation: report.violation,
    });
    Ok(run)
}

fn run_matching(g: &Graph, n_left: usize, n_right: usize, p: f64, seed: u64) -> Result<RunReport> {
    let mut run = RunReport::new(seed, Some(g));
    let res = extract_induced_matching(g, n_left)?;
    // left vertices with exactly one neighbor: n_left · n_right·p · (1-p)^(n_right-1)
    let s_expected = n_left as f64 * n_right as f64 * p * (1.0 - p).powf(n_right as f64 - 1.0);
    let s_band = deviation_band(n_left);
    let matching_floor = 0.8 * n_left as f64 / E.powi(3);
    let valid = verify_induced_matching(g, &res.matching);
    run.audits.push(Audit::hard("induced_matching_valid", valid));
    run.audits.push(Audit::statistical("matching_size_floor", res.matching.len() as f64 >= matching_floor));
    run.audits.push(Audit::statistical("singleton_band", (res.s.len() as f64 - s_expected).abs() <= s_band));
    run.induced_matching = Some(MatchingSummary {
        n_left,
        n_right,
        s_size: res.s.len(),
        t_size: res.t.len(),
        t_prime_size: res.t_prime.len(),
        s_prime_size: res.s_prime.len(),
        matching_size: res.matching.len(),
        valid,
        s_expected,
        s_band,
        matching_floor,
    });
    Ok(run)
}

/// `(n, p, t)` for sums of `n` Bernoulli(`p`) variables.
pub const CHERNOFF_POINTS: [(usize, f64, f64); 3] = [(100, 0.5, 10.0), (400, 0.3, 30.0), (1000, 0.5, 50.0)];

/// `(balls, t)`; bins are twice the balls and the designated bins are the even ones.
pub const BOUNDED_DIFFERENCES_POINTS: [(usize, f64); 3] = [(100, 20.0), (400, 50.0), (1000, 90.0)];

/// Moving one ball changes the singleton count of any bin set by at most 2.
pub const BALLS_LIPSCHITZ: f64 = 2.0;

fn point_seed(seed: u64, point: u64) -> RngSeed {
    RngSeed::new(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(point))
}

fn run_concentration(cfg: &ExperimentConfig, seed: u64) -> RunReport {
    let mut run = RunReport::new(seed, None);
    let trials = cfg.trials;
    for (k, &(n, p, t)) in CHERNOFF_POINTS.iter().enumerate() {
        let sampler = |rng: &mut rand_chacha::ChaCha8Rng| (0..n).filter(|_| rng.random_bool(p)).count() as f64;
        let est = empirical_tail(sampler, trials, t, Some(n as f64 * p), point_seed(seed, k as u64));
        let bound = chernoff_bound(n, t);
        run.concentration.push(StatReport {
            experiment: "chernoff".into(),
            params: vec![("n".into(), n as f64), ("p".into(), p), ("t".into(), t)],
            trials,
            observed: est.frequency,
            bound,
            pass: est.frequency <= bound,
        });
    }
    for (k, &(balls, t)) in BOUNDED_DIFFERENCES_POINTS.iter().enumerate() {
        let bins = 2 * balls;
        let designated = VertexSet::from_iter(bins, (0..bins).step_by(2));
        let sampler = |rng: &mut rand_chacha::ChaCha8Rng| {
            singletons_in(&assign_balls(balls, bins, rng), &designated) as f64
        };
        let mean = expected_singletons(balls, bins, designated.len());
        let est = empirical_tail(sampler, trials, t, Some(mean), point_seed(seed, 16 + k as u64));
        let bound = bounded_differences_bound(balls, BALLS_LIPSCHITZ, t);
        run.concentration.push(StatReport {
            experiment: "bounded_differences".into(),
            params: vec![
                ("n".into(), balls as f64),
                ("bins".into(), bins as f64),
                ("d".into(), BALLS_LIPSCHITZ),
                ("t".into(), t),
            ],
            trials,
            observed: est.frequency,
            bound,
            pass: est.frequency <= bound,
        });
    }
    for r in &run.concentration {
        run.audits.push(
            Audit::statistical(&format!("{}_tail", r.experiment), r.pass)
                .with_detail(format!("observed {} vs bound {}", r.observed, r.bound)),
        );
    }
    run
}

fn summarize(cfg: &ExperimentConfig, runs: &[RunReport]) -> Summary {
    let mut tallies: BTreeMap<&str, (AuditKind, usize, usize)> = BTreeMap::new();
    for a in runs.iter().flat_map(|r| &r.audits) {
        let e = tallies.entry(&a.name).or_insert((a.kind, 0, 0));
        e.1 += a.pass as usize;
        e.2 += 1;
    }
    let rates: Vec<AuditRate> = tallies
        .into_iter()
        .map(|(name, (kind, passed, total))| {
            let rate = passed as f64 / total as f64;
            let floor = match kind {
                AuditKind::Hard => None,
                AuditKind::Statistical => cfg.floors.get(name).copied(),
            };
            let pass = match kind {
                AuditKind::Hard => passed == total,
                AuditKind::Statistical => floor.is_none_or(|f| rate >= f),
            };
            AuditRate { name: name.into(), kind, passed, total, rate, floor, pass }
        })
        .collect();
    let hard_audits_passed = runs.iter().all(RunReport::hard_audits_passed);
    let pass = rates.iter().all(|r| r.pass);
    let groups = if cfg.command == Command::MemorySweep { sweep_groups(runs) } else { Vec::new() };
    Summary { runs: runs.len(), hard_audits_passed, rates, groups, pass }
}

fn sweep_groups(runs: &[RunReport]) -> Vec<SweepGroup> {
    let mut groups: Vec<SweepGroup> = Vec::new();
    for m in runs.iter().filter_map(|r| r.mpc.as_ref()) {
        let idx = match groups.iter().position(|g| g.s == m.s) {
            Some(i) => i,
            None => {
                groups.push(SweepGroup {
                    s: m.s,
                    runs: 0,
                    max_rounds: 0,
                    round_budget: m.round_budget,
                    max_edges: 0,
                    memory_budget: m.memory_budget,
                    runs_within_rounds: 0,
                    runs_within_memory: 0,
                });
                groups.len() - 1
            }
        };
        let g = &mut groups[idx];
        g.runs += 1;
        g.max_rounds = g.max_rounds.max(m.total_rounds);
        g.round_budget = g.round_budget.max(m.round_budget);
        g.max_edges = g.max_edges.max(m.max_edges_any_machine);
        g.runs_within_rounds += (m.total_rounds <= m.round_budget) as usize;
        g.runs_within_memory += (m.max_edges_any_machine <= m.memory_budget) as usize;
    }
    groups
}
