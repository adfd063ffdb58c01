//! Flat CSV for external plotting: one row per run, per phase, or per
//! concentration point, with the columns named in an [`AxesSpec`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Command;
use crate::error::{config_err, CliError, Result};
use crate::report::{ExperimentReport, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Run,
    Phase,
    Point,
}

/// `[level:]col,col,...`, e.g. `phase:phase,max_machine_edges` or `seed,total_rounds`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AxesSpec {
    pub level: Level,
    pub columns: Vec<String>,
}

impl AxesSpec {
    pub fn default_for(command: Command) -> Self {
        let (level, cols): (Level, &[&str]) = match command {
            Command::RunParallel => (
                Level::Run,
                &["seed", "n", "m", "s", "parallel_cover", "lower_bound", "parallel_ratio", "total_rounds", "round_budget", "max_edges_any_machine", "memory_budget"],
            ),
            Command::RunSequential => {
                (Level::Run, &["seed", "n", "m", "sequential_cover", "lower_bound", "sequential_ratio"])
            }
            Command::Compare => (
                Level::Run,
                &["seed", "n", "m", "lower_bound", "lower_bound_oracle", "parallel_cover", "parallel_ratio", "sequential_cover", "sequential_ratio"],
            ),
            Command::Sandwich => (Level::Run, &["seed", "sandwich_held"]),
            Command::MemorySweep => (
                Level::Run,
                &["s", "seed", "total_rounds", "round_budget", "max_edges_any_machine", "memory_budget"],
            ),
            Command::AppendixMatching => (
                Level::Run,
                &["seed", "s_size", "t_size", "t_prime_size", "matching_size", "matching_valid"],
            ),
            Command::AppendixConcentration => {
                (Level::Point, &["seed", "experiment", "n", "t", "trials", "observed", "bound", "pass"])
            }
        };
        AxesSpec { level, columns: cols.iter().map(|c| c.to_string()).collect() }
    }
}

impl FromStr for AxesSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let (level, rest) = match s.split_once(':') {
            Some(("run", rest)) => (Level::Run, rest),
            Some(("phase", rest)) => (Level::Phase, rest),
            Some(("point", rest)) => (Level::Point, rest),
            Some((other, _)) => return config_err(format!("unknown axes level {other:?}")),
            None => (Level::Run, s),
        };
        let columns: Vec<String> =
            rest.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
        if columns.is_empty() {
            return config_err(format!("axes spec {s:?} names no columns"));
        }
        Ok(AxesSpec { level, columns })
    }
}

impl fmt::Display for AxesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Level::Run => "run",
            Level::Phase => "phase",
            Level::Point => "point",
        };
        write!(f, "{level}:{}", self.columns.join(","))
    }
}

impl TryFrom<String> for AxesSpec {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AxesSpec> for String {
    fn from(a: AxesSpec) -> String {
        a.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Float(x) => write!(f, "{x}"),
            Cell::Bool(b) => f.write_str(if *b { "1" } else { "0" }),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

type Row = Vec<(String, Cell)>;

fn push(row: &mut Row, name: &str, cell: Cell) {
    row.push((name.to_string(), cell));
}

fn int(x: usize) -> Cell {
    Cell::Int(x as u64)
}

fn run_row(run: &RunReport) -> Row {
    let mut row = Row::new();
    push(&mut row, "seed", Cell::Int(run.seed));
    if let Some(g) = &run.graph {
        push(&mut row, "n", int(g.n));
        push(&mut row, "m", int(g.m));
        push(&mut row, "max_degree", int(g.max_degree));
    }
    if let Some(lb) = &run.lower_bound {
        push(&mut row, "lower_bound", int(lb.value));
        let oracle = serde_json::to_value(lb.oracle).ok().and_then(|v| v.as_str().map(String::from));
        push(&mut row, "lower_bound_oracle", Cell::Text(oracle.unwrap_or_default()));
    }
    for r in &run.results {
        push(&mut row, &format!("{}_cover", r.algorithm), int(r.cover_size));
        push(&mut row, &format!("{}_ratio", r.algorithm), r.ratio.map_or(Cell::Empty, Cell::Float));
    }
    if let Some(m) = &run.mpc {
        push(&mut row, "s", int(m.s));
        push(&mut row, "c_scale", Cell::Float(m.c_scale));
        push(&mut row, "tau", int(m.thresholds.len()));
        push(&mut row, "total_rounds", int(m.total_rounds));
        push(&mut row, "round_budget", int(m.round_budget));
        push(&mut row, "max_edges_any_machine", int(m.max_edges_any_machine));
        push(&mut row, "memory_budget", int(m.memory_budget));
    }
    if let Some(sw) = &run.sandwich {
        push(&mut row, "sandwich_held", Cell::Bool(sw.held));
        push(&mut row, "reference_cover_size", int(sw.reference_cover_size));
    }
    if let Some(im) = &run.induced_matching {
        push(&mut row, "n_left", int(im.n_left));
        push(&mut row, "n_right", int(im.n_right));
        push(&mut row, "s_size", int(im.s_size));
        push(&mut row, "t_size", int(im.t_size));
        push(&mut row, "t_prime_size", int(im.t_prime_size));
        push(&mut row, "matching_size", int(im.matching_size));
        push(&mut row, "matching_valid", Cell::Bool(im.valid));
    }
    push(&mut row, "hard_audits_passed", Cell::Bool(run.hard_audits_passed()));
    row
}

/// `τ` rows: each compressed phase, then the final phase.
fn phase_rows(run: &RunReport) -> Vec<Row> {
    let Some(m) = &run.mpc else { return Vec::new() };
    let base = run_row(run);
    let verdict = |i: usize| run.sandwich.as_ref().and_then(|s| s.phases.iter().find(|v| v.i == i));
    let mut rows: Vec<Row> = m
        .phases
        .iter()
        .map(|p| {
            let mut row = base.clone();
            push(&mut row, "phase", int(p.i));
            push(&mut row, "kind", Cell::Text("compressed".into()));
            push(&mut row, "delta", Cell::Float(p.delta));
            push(&mut row, "delta_next", Cell::Float(p.delta_next));
            push(&mut row, "p", Cell::Float(p.p));
            push(&mut row, "k", int(p.k));
            push(&mut row, "local_iterations", int(p.local_iterations));
            push(&mut row, "alive_before", int(p.alive_before));
            push(&mut row, "peeled", int(p.peeled + p.cleanup_peeled));
            push(&mut row, "cleanup_peeled", int(p.cleanup_peeled));
            push(&mut row, "edges_remaining", int(p.edges_remaining));
            push(&mut row, "phase_rounds", int(p.rounds));
            push(&mut row, "max_machine_edges", int(p.max_machine_edges));
            let v = verdict(p.i);
            push(&mut row, "a_superset_o", v.map_or(Cell::Empty, |v| Cell::Bool(v.a_superset_o)));
            push(&mut row, "b_subset_obar", v.map_or(Cell::Empty, |v| Cell::Bool(v.b_subset_obar)));
            row
        })
        .collect();
    let f = &m.final_phase;
    let mut row = base;
    push(&mut row, "phase", int(m.phases.len() + 1));
    push(&mut row, "kind", Cell::Text("final".into()));
    push(&mut row, "delta", Cell::Float(f.delta));
    push(&mut row, "delta_next", Cell::Empty);
    push(&mut row, "p", Cell::Empty);
    push(&mut row, "k", int(1));
    push(&mut row, "local_iterations", int(f.iterations));
    push(&mut row, "alive_before", int(f.residual_vertices));
    push(&mut row, "peeled", int(f.cover_size));
    push(&mut row, "cleanup_peeled", int(0));
    push(&mut row, "edges_remaining", int(0));
    push(&mut row, "phase_rounds", int(f.rounds));
    push(&mut row, "max_machine_edges", int(f.residual_edges));
    push(&mut row, "a_superset_o", Cell::Empty);
    push(&mut row, "b_subset_obar", Cell::Empty);
    rows.push(row);
    rows
}

fn point_rows(run: &RunReport) -> Vec<Row> {
    let base = run_row(run);
    run.concentration
        .iter()
        .map(|r| {
            let mut row = base.clone();
            push(&mut row, "experiment", Cell::Text(r.experiment.clone()));
            for (name, value) in &r.params {
                push(&mut row, name, Cell::Float(*value));
            }
            push(&mut row, "trials", int(r.trials));
            push(&mut row, "observed", Cell::Float(r.observed));
            push(&mut row, "bound", Cell::Float(r.bound));
            push(&mut row, "pass", Cell::Bool(r.pass));
            row
        })
        .collect()
}

/// CSV with one row per run, phase, or point of every report, columns in
/// `axes` order. Boolean columns are written as 0/1 and, when present, a final
/// `rate` row gives the fraction of 1s in each of them.
pub fn emit_plot_data(reports: &[ExperimentReport], axes: &AxesSpec) -> Result<String> {
    let Some(first) = reports.first() else {
        return config_err("no reports to plot");
    };
    if let Some(other) = reports.iter().find(|r| r.config.command != first.config.command) {
        return Err(mpcvc::Error::Parameter(format!(
            "mismatched schemas: {} and {} reports cannot share one table",
            first.config.command, other.config.command
        ))
        .into());
    }
    let rows: Vec<Row> = reports
        .iter()
        .flat_map(|rep| &rep.runs)
        .flat_map(|run| match axes.level {
            Level::Run => vec![run_row(run)],
            Level::Phase => phase_rows(run),
            Level::Point => point_rows(run),
        })
        .collect();
    for col in &axes.columns {
        if !rows.iter().any(|row| row.iter().any(|(name, _)| name == col)) && !rows.is_empty() {
            return Err(mpcvc::Error::Parameter(format!(
                "mismatched schema: no column {col:?} in {} rows of {} reports",
                level_name(axes.level),
                first.config.command
            ))
            .into());
        }
    }
    let table: Vec<Vec<Cell>> = rows
        .into_iter()
        .map(|row| {
            axes.columns
                .iter()
                .map(|col| row.iter().find(|(n, _)| n == col).map_or(Cell::Empty, |(_, c)| c.clone()))
                .collect()
        })
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Config(format!("csv: {e}"));
    w.write_record(&axes.columns).map_err(io)?;
    for row in &table {
        w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
    }
    let is_bool = |j: usize| table.iter().any(|row| matches!(row[j], Cell::Bool(_)));
    if (0..axes.columns.len()).any(is_bool) {
        let label_at = (0..axes.columns.len()).find(|&j| !is_bool(j));
        let summary: Vec<String> = (0..axes.columns.len())
            .map(|j| {
                if Some(j) == label_at {
                    return "rate".to_string();
                }
                if !is_bool(j) {
                    return String::new();
                }
                let vals: Vec<bool> =
                    table.iter().filter_map(|row| if let Cell::Bool(b) = row[j] { Some(b) } else { None }).collect();
                let rate = vals.iter().filter(|&&b| b).count() as f64 / vals.len() as f64;
                rate.to_string()
            })
            .collect();
        w.write_record(&summary).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn level_name(level: Level) -> &'static str {
    match level {
        Level::Run => "run",
        Level::Phase => "phase",
        Level::Point => "point",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_axes() {
        let a: AxesSpec = "phase:phase,max_machine_edges".parse().unwrap();
        assert_eq!(a.level, Level::Phase);
        assert_eq!(a.columns, vec!["phase", "max_machine_edges"]);
        let b: AxesSpec = "seed,total_rounds".parse().unwrap();
        assert_eq!(b.level, Level::Run);
        assert!("bogus:x".parse::<AxesSpec>().is_err());
        assert!("run:".parse::<AxesSpec>().is_err());
        assert_eq!(a.to_string().parse::<AxesSpec>().unwrap(), a);
    }
}
