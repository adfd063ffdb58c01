//! Experiment configuration: a TOML document, command-line flags layered on
//! top, resolved into one validated [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mpcvc::mpc::{FinalPhaseMode, DEFAULT_C_AUDIT, DEFAULT_C_SCALE};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError, Result};
use crate::plot::AxesSpec;

pub const DEFAULT_EXACT_LIMIT: usize = 40;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_S_EXPONENTS: [f64; 3] = [1.0, 0.75, 0.5];
pub const DEFAULT_SANDWICH_FLOOR: f64 = 0.5;
pub const DEFAULT_MEMORY_FLOOR: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    RunParallel,
    RunSequential,
    Compare,
    Sandwich,
    MemorySweep,
    AppendixMatching,
    AppendixConcentration,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::RunParallel => "run-parallel",
            Command::RunSequential => "run-sequential",
            Command::Compare => "compare",
            Command::Sandwich => "sandwich",
            Command::MemorySweep => "memory-sweep",
            Command::AppendixMatching => "appendix-matching",
            Command::AppendixConcentration => "appendix-concentration",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// `gnp:N:P` or `bip:NL:NR:P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GenSpec {
    Gnp { n: usize, p: f64 },
    Bipartite { n_left: usize, n_right: usize, p: f64 },
}

impl FromStr for GenSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Config(format!("bad generator spec {s:?}; use gnp:N:P or bip:NL:NR:P"));
        let int = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        let prob = |x: &str| {
            let p = x.trim().parse::<f64>().map_err(|_| bad())?;
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                config_err(format!("probability {p} in {s:?} is outside [0, 1]"))
            }
        };
        match parts.as_slice() {
            ["gnp", n, p] => Ok(GenSpec::Gnp { n: int(n)?, p: prob(p)? }),
            ["bip", l, r, p] => Ok(GenSpec::Bipartite { n_left: int(l)?, n_right: int(r)?, p: prob(p)? }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Gnp { n, p } => write!(f, "gnp:{n}:{p}"),
            GenSpec::Bipartite { n_left, n_right, p } => write!(f, "bip:{n_left}:{n_right}:{p}"),
        }
    }
}

impl TryFrom<String> for GenSpec {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GenSpec> for String {
    fn from(g: GenSpec) -> String {
        g.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    File(PathBuf),
    Generator(GenSpec),
}

/// Half-open seed range `start..end`; a single seed `s` is `s..s+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn single(seed: u64) -> Self {
        SeedRange { start: seed, end: seed + 1 }
    }

    pub fn seeds(&self) -> std::ops::Range<u64> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

impl FromStr for SeedRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Config(format!("bad seed range {s:?}; use A..B or a single seed"));
        match s.split_once("..") {
            Some((a, b)) => {
                let start = a.trim().parse().map_err(|_| bad())?;
                let end = b.trim().parse().map_err(|_| bad())?;
                if end <= start {
                    return config_err(format!("seed range {s:?} is empty"));
                }
                Ok(SeedRange { start, end })
            }
            None => Ok(SeedRange::single(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl TryFrom<String> for SeedRange {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SeedRange> for String {
    fn from(r: SeedRange) -> String {
        r.to_string()
    }
}

/// One configuration layer. Every field is optional so a file and the flags
/// can each set a subset; [`PartialConfig::merge`] lets the later layer win.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub graph: Option<PathBuf>,
    pub gen: Option<GenSpec>,
    pub s: Option<usize>,
    pub c_scale: Option<f64>,
    pub c_audit: Option<f64>,
    pub final_mode: Option<FinalPhaseMode>,
    pub seed: Option<u64>,
    pub seeds: Option<SeedRange>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub axes: Option<AxesSpec>,
    pub threads: Option<usize>,
    pub exact_limit: Option<usize>,
    pub s_exponents: Option<Vec<f64>>,
    pub trials: Option<usize>,
    #[serde(default)]
    pub floors: BTreeMap<String, f64>,
}

impl PartialConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`. The graph source and the
    /// seed selection are replaced as a unit.
    pub fn merge(mut self, over: PartialConfig) -> PartialConfig {
        if over.graph.is_some() || over.gen.is_some() {
            self.graph = over.graph;
            self.gen = over.gen;
        }
        if over.seed.is_some() || over.seeds.is_some() {
            self.seed = over.seed;
            self.seeds = over.seeds;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(command, s, c_scale, c_audit, final_mode, out, format, axes, threads, exact_limit, s_exponents, trials);
        self.floors.extend(over.floors);
        self
    }

    pub fn resolve(self) -> Result<ExperimentConfig> {
        let Some(command) = self.command else {
            return config_err("no command given");
        };
        let graph = match (self.graph, self.gen) {
            (Some(_), Some(_)) => return config_err("graph file and generator spec are mutually exclusive"),
            (Some(path), None) => Some(GraphSource::File(path)),
            (None, Some(gen)) => Some(GraphSource::Generator(gen)),
            (None, None) => None,
        };
        match (command, &graph) {
            (Command::AppendixConcentration, Some(_)) => {
                return config_err("appendix-concentration does not take a graph")
            }
            (Command::AppendixConcentration, None) => {}
            (Command::AppendixMatching, Some(GraphSource::Generator(GenSpec::Bipartite { .. }))) => {}
            (Command::AppendixMatching, _) => {
                return config_err("appendix-matching needs a bipartite generator, --gen bip:NL:NR:P")
            }
            (_, None) => return config_err("no graph given; use --graph FILE or --gen SPEC"),
            _ => {}
        }
        let seeds = match (self.seed, self.seeds) {
            (Some(_), Some(_)) => return config_err("seed and seeds are mutually exclusive"),
            (Some(s), None) => SeedRange::single(s),
            (None, Some(r)) => r,
            (None, None) => SeedRange::single(0),
        };
        let c_scale = self.c_scale.unwrap_or(DEFAULT_C_SCALE);
        let c_audit = self.c_audit.unwrap_or(DEFAULT_C_AUDIT);
        for (name, v) in [("c_scale", c_scale), ("c_audit", c_audit)] {
            if !(v > 0.0 && v.is_finite()) {
                return config_err(format!("{name} must be positive, got {v}"));
            }
        }
        let s_exponents = self.s_exponents.unwrap_or_else(|| DEFAULT_S_EXPONENTS.to_vec());
        if s_exponents.is_empty() || s_exponents.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return config_err("s_exponents must be a non-empty list of values in (0, 1]");
        }
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return config_err("trials must be positive");
        }
        let mut floors = BTreeMap::from([
            ("memory_budget".to_string(), DEFAULT_MEMORY_FLOOR),
            ("sandwich".to_string(), DEFAULT_SANDWICH_FLOOR),
        ]);
        floors.extend(self.floors);
        if let Some((name, f)) = floors.iter().find(|(_, f)| !(0.0..=1.0).contains(*f)) {
            return config_err(format!("floor for {name} must lie in [0, 1], got {f}"));
        }
        let exact_limit = self.exact_limit.unwrap_or(DEFAULT_EXACT_LIMIT);
        if exact_limit > 64 {
            return config_err(format!("exact_limit is at most 64, got {exact_limit}"));
        }
        if self.threads == Some(0) {
            return config_err("threads must be positive");
        }
        let format = self.format.unwrap_or_default();
        let axes = match self.axes {
            Some(a) => a,
            None => AxesSpec::default_for(command),
        };
        Ok(ExperimentConfig {
            command,
            graph,
            s: self.s,
            c_scale,
            c_audit,
            final_mode: self.final_mode,
            seeds,
            exact_limit,
            s_exponents,
            trials,
            floors,
            format,
            axes,
            out: self.out,
            threads: self.threads,
        })
    }
}

/// A validated experiment. Serializes as the config echo in every report;
/// the output path and thread count are left out because they must not
/// change the report's bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
    /// Per-machine memory; defaults to `n`.
    pub s: Option<usize>,
    pub c_scale: f64,
    pub c_audit: f64,
    /// Defaults to single-machine when `s = n` and iterated otherwise.
    pub final_mode: Option<FinalPhaseMode>,
    pub seeds: SeedRange,
    /// Largest number of non-isolated vertices handed to the exact solver.
    pub exact_limit: usize,
    /// Memory sweep uses `s = n^e` for each exponent.
    pub s_exponents: Vec<f64>,
    /// Monte Carlo trials per concentration point.
    pub trials: usize,
    /// Minimum pass rate per statistical audit.
    pub floors: BTreeMap<String, f64>,
    pub format: OutputFormat,
    pub axes: AxesSpec,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// `s`, clamped against `n`, and the final-phase mode that goes with it.
    pub fn memory_for(&self, n: usize, s: Option<usize>) -> Result<(usize, FinalPhaseMode)> {
        let s = s.or(self.s).unwrap_or(n);
        if s < 2 || s > n {
            return config_err(format!("s = {s} must satisfy 2 <= s <= n = {n}"));
        }
        let mode = self.final_mode.unwrap_or(if s == n {
            FinalPhaseMode::SingleMachine
        } else {
            FinalPhaseMode::IteratedPeeling
        });
        Ok((s, mode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_specs() {
        assert_eq!("gnp:40:0.3".parse::<GenSpec>().unwrap(), GenSpec::Gnp { n: 40, p: 0.3 });
        assert_eq!(
            "bip:10:20:0.5".parse::<GenSpec>().unwrap(),
            GenSpec::Bipartite { n_left: 10, n_right: 20, p: 0.5 }
        );
        assert!("gnp:40".parse::<GenSpec>().is_err());
        assert!("gnp:40:1.5".parse::<GenSpec>().is_err());
        assert!("er:40:0.1".parse::<GenSpec>().is_err());
        assert_eq!(GenSpec::Gnp { n: 5, p: 0.25 }.to_string(), "gnp:5:0.25");
    }

    #[test]
    fn seed_ranges() {
        assert_eq!("3..7".parse::<SeedRange>().unwrap().seeds(), 3..7);
        assert_eq!("9".parse::<SeedRange>().unwrap().seeds(), 9..10);
        assert!("7..3".parse::<SeedRange>().is_err());
        assert!("a..b".parse::<SeedRange>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = PartialConfig::from_toml(
            "command = \"run-parallel\"\ngen = \"gnp:100:0.1\"\nc_scale = 2.0\nseeds = \"0..5\"\n",
        )
        .unwrap();
        let flags = PartialConfig { c_scale: Some(3.0), seed: Some(9), ..Default::default() };
        let cfg = file.merge(flags).resolve().unwrap();
        assert_eq!(cfg.c_scale, 3.0);
        assert_eq!(cfg.seeds, SeedRange::single(9));
        assert_eq!(cfg.graph, Some(GraphSource::Generator(GenSpec::Gnp { n: 100, p: 0.1 })));
    }

    #[test]
    fn flag_graph_replaces_file_generator() {
        let file = PartialConfig::from_toml("command = \"compare\"\ngen = \"gnp:10:0.1\"").unwrap();
        let flags = PartialConfig { graph: Some("g.txt".into()), ..Default::default() };
        let cfg = file.merge(flags).resolve().unwrap();
        assert_eq!(cfg.graph, Some(GraphSource::File("g.txt".into())));
    }

    #[test]
    fn mutually_exclusive_sources() {
        let both = PartialConfig::from_toml(
            "command = \"compare\"\ngen = \"gnp:10:0.1\"\ngraph = \"g.txt\"",
        )
        .unwrap();
        assert!(both.resolve().is_err());
    }

    #[test]
    fn command_specific_checks() {
        let p = |t: &str| PartialConfig::from_toml(t).and_then(PartialConfig::resolve);
        assert!(p("command = \"appendix-matching\"\ngen = \"gnp:10:0.1\"").is_err());
        assert!(p("command = \"appendix-matching\"\ngen = \"bip:10:10:0.1\"").is_ok());
        assert!(p("command = \"appendix-concentration\"").is_ok());
        assert!(p("command = \"run-sequential\"").is_err());
        assert!(p("command = \"run-sequential\"\ngen = \"gnp:10:0.1\"\nbogus = 1").is_err());
        assert!(p("command = \"sandwich\"\ngen = \"gnp:10:0.1\"\nc_scale = -1.0").is_err());
    }

    #[test]
    fn default_memory_and_mode() {
        let cfg = PartialConfig::from_toml("command = \"run-parallel\"\ngen = \"gnp:10:0.1\"")
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(cfg.memory_for(100, None).unwrap(), (100, FinalPhaseMode::SingleMachine));
        assert_eq!(cfg.memory_for(100, Some(10)).unwrap(), (10, FinalPhaseMode::IteratedPeeling));
        assert!(cfg.memory_for(100, Some(200)).is_err());
    }
}
