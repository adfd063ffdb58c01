use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mpcvc::mpc::FinalPhaseMode;
use mpcvc_cli::config::{Command, GenSpec, OutputFormat, PartialConfig, SeedRange};
use mpcvc_cli::{run_with_threads, write_report, AxesSpec, CliError};

/// Simulate round-compressed parallel peeling for vertex cover and audit it.
#[derive(Debug, Parser)]
#[command(name = "mpcvc", version)]
struct Args {
    /// Experiment to run; may instead come from the config file.
    #[arg(value_enum)]
    command: Option<Command>,

    /// TOML config; flags given here override its keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Edge-list file ("n m" header, then "u v" per line).
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,

    /// Generator: gnp:N:P or bip:NL:NR:P.
    #[arg(long)]
    gen: Option<GenSpec>,

    /// Memory per machine (defaults to n).
    #[arg(long)]
    s: Option<usize>,

    #[arg(long)]
    c_scale: Option<f64>,

    #[arg(long)]
    c_audit: Option<f64>,

    /// single or iterated; defaults to single when s = n.
    #[arg(long)]
    final_mode: Option<FinalPhaseMode>,

    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,

    /// Half-open range A..B.
    #[arg(long)]
    seeds: Option<SeedRange>,

    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// CSV columns as [run|phase|point:]col,col,...
    #[arg(long)]
    axes: Option<AxesSpec>,

    /// Worker threads (does not affect results).
    #[arg(long)]
    threads: Option<usize>,

    /// Largest non-isolated vertex count sent to the exact solver.
    #[arg(long)]
    exact_limit: Option<usize>,

    /// Memory sweep exponents e, giving s = n^e.
    #[arg(long, value_delimiter = ',')]
    s_exponents: Option<Vec<f64>>,

    /// Monte Carlo trials per concentration point.
    #[arg(long)]
    trials: Option<usize>,

    /// Minimum pass rate for a statistical audit, as NAME=RATE.
    #[arg(long, value_parser = parse_floor)]
    floor: Vec<(String, f64)>,
}

fn parse_floor(s: &str) -> Result<(String, f64), String> {
    let (name, rate) = s.split_once('=').ok_or("expected NAME=RATE")?;
    let rate = rate.parse::<f64>().map_err(|e| e.to_string())?;
    Ok((name.to_string(), rate))
}

impl Args {
    fn into_layers(self) -> Result<PartialConfig, CliError> {
        let file = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            command: self.command,
            graph: self.graph,
            gen: self.gen,
            s: self.s,
            c_scale: self.c_scale,
            c_audit: self.c_audit,
            final_mode: self.final_mode,
            seed: self.seed,
            seeds: self.seeds,
            out: self.out,
            format: self.format,
            axes: self.axes,
            threads: self.threads,
            exact_limit: self.exact_limit,
            s_exponents: self.s_exponents,
            trials: self.trials,
            floors: self.floor.into_iter().collect(),
        };
        Ok(file.merge(flags))
    }
}

fn run(args: Args) -> Result<i32, CliError> {
    let cfg = args.into_layers()?.resolve()?;
    let report = run_with_threads(&cfg, cfg.threads)?;
    if let Some(text) = write_report(&report)? {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    }
    for rate in report.summary.rates.iter().filter(|r| !r.pass) {
        log::warn!("audit {} passed {}/{}", rate.name, rate.passed, rate.total);
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
