//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a solver fails to converge or a
//! comparison exceeds its tolerance, 2 for usage and parameter errors.

use std::io::Write;
use std::path::PathBuf;

use aoi_core::analytic::{self, AnalyticSolution};
use aoi_core::chain::{self, Method, SolveOptions};
use aoi_core::{AoIDistribution, Discipline, DiscreteDist, SystemSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::distspec::{format_dist, parse_dist};
use crate::report::{self, round12, CompareRow, EngineRow, Format, SweepRow};
use crate::sim::{self, SimConfig, SimResult};

#[derive(Debug, Parser)]
#[command(name = "aoi", version, about = "Discrete age of information for bufferless status-update systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// AoI distribution from the generating functions.
    Analytic {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// AoI distribution from the truncated Markov chain.
    Chain {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        chain: ChainArgs,
        /// Also write the transition list to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// AoI distribution from Monte Carlo simulation.
    Sim {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs every applicable engine and checks that they agree.
    Compare {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        tolerances: CompareArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean AoI over a grid of geometric rates.
    Sweep {
        #[command(flatten)]
        system: SystemArgs,
        /// `p=start:stop:step` or `gamma=start:stop:step`; repeat for a product grid.
        #[arg(long = "grid", required = true)]
        grids: Vec<String>,
        /// Add the chain mean to every row.
        #[arg(long = "with-chain")]
        with_chain: bool,
        /// Add the simulated mean to every row.
        #[arg(long = "with-sim")]
        with_sim: bool,
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DisciplineArg {
    Preemptive,
    Nonpreemptive,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum)]
    pub discipline: DisciplineArg,
    /// Interarrival distribution, e.g. `geometric:0.5`.
    #[arg(long = "Y")]
    pub interarrival: Option<String>,
    /// Service distribution, e.g. `explicit:1,1`.
    #[arg(long = "S", conflicts_with = "gamma")]
    pub service: Option<String>,
    /// Geometric service rate; shorthand for `--S geometric:<gamma>`.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Truncation order of the generating-function series.
    #[arg(long, default_value_t = 256)]
    pub order: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Largest AoI kept in the chain; chosen from the distributions if absent.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Stopping tolerance of the stationary solver (L1 change per sweep).
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "max-iters", default_value_t = 1_000_000)]
    pub max_iters: usize,
    /// Use lazy power iteration instead of Gauss-Seidel sweeps.
    #[arg(long)]
    pub power: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Simulated slots per replication, warmup included.
    #[arg(long, default_value_t = 1_000_000)]
    pub slots: u64,
    /// Discarded initial slots per replication.
    #[arg(long)]
    pub warmup: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub reps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Allowed mean gap between analytic and chain results.
    #[arg(long = "mean-tol", default_value_t = 1e-6)]
    pub mean_tol: f64,
    /// Allowed L-infinity pmf gap between analytic and chain results.
    #[arg(long = "pmf-tol", default_value_t = 1e-6)]
    pub pmf_tol: f64,
    /// Allowed simulated mean gap, in standard errors.
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
    /// Allowed L-infinity pmf gap against the simulation.
    #[arg(long = "sim-pmf-tol", default_value_t = 0.01)]
    pub sim_pmf_tol: f64,
    /// Skip the simulation.
    #[arg(long = "no-sim")]
    pub no_sim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Main table destination; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<aoi_core::Error> for CliError {
    fn from(e: aoi_core::Error) -> Self {
        match e {
            aoi_core::Error::Convergence(_) | aoi_core::Error::Certification(_) => CliError::Failure(e.to_string()),
            aoi_core::Error::Unsupported(msg) => {
                CliError::Usage(format!("unsupported analytics: {msg}; use `aoi sim` or `aoi chain` instead"))
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<crate::distspec::DistSpecError> for CliError {
    fn from(e: crate::distspec::DistSpecError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<report::ReportError> for CliError {
    fn from(e: report::ReportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Where tables go: the main table to `--out` or stdout, the summary to
/// stdout when the main table went to a file and to stderr otherwise.
pub struct Sinks<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs a parsed command. `Ok(false)` means a tolerance check failed.
pub fn run(cli: Cli, sinks: Sinks<'_>) -> Result<bool, CliError> {
    match cli.command {
        Command::Analytic { system, series, output } => {
            let spec = system.resolve()?;
            let (row, a) = run_analytic(&spec, series.order)?;
            emit(&output, sinks, &report::pmf_rows(&a.pmf), &[row])?;
            Ok(true)
        }
        Command::Chain { system, chain, edges, output } => {
            let spec = system.resolve()?;
            let (row, a) = run_chain(&spec, &chain, edges.as_deref())?;
            emit(&output, sinks, &report::pmf_rows(&a.pmf), &[row])?;
            Ok(true)
        }
        Command::Sim { system, sim, output } => {
            let spec = system.resolve()?;
            let (row, r) = run_sim(&spec, &sim)?;
            emit(&output, sinks, &report::pmf_rows(&r.pmf), &[row])?;
            Ok(true)
        }
        Command::Compare { system, series, chain, sim, tolerances, output } => {
            let spec = system.resolve()?;
            let (engines, rows) = run_compare(&spec, &series, &chain, &sim, &tolerances)?;
            let pass = rows.iter().all(|r| r.pass);
            emit(&output, sinks, &rows, &engines)?;
            Ok(pass)
        }
        Command::Sweep { system, grids, with_chain, with_sim, series, chain, sim, output } => {
            let points = grid_points(&grids)?;
            let rows = run_sweep(&system, &points, &series, with_chain.then_some(&chain), with_sim.then_some(&sim))?;
            emit::<_, EngineRow>(&output, sinks, &rows, &[])?;
            Ok(true)
        }
    }
}

fn emit<M: serde::Serialize, S: serde::Serialize>(
    output: &OutputArgs,
    sinks: Sinks<'_>,
    main: &[M],
    summary: &[S],
) -> Result<(), CliError> {
    let summary_sink = match &output.out {
        Some(path) => {
            report::write_file(path, main, output.format)?;
            sinks.stdout
        }
        None => {
            report::write_rows(main, output.format, &mut *sinks.stdout)?;
            sinks.stderr
        }
    };
    if !summary.is_empty() {
        report::write_rows(summary, output.format, summary_sink)?;
    }
    Ok(())
}

impl SystemArgs {
    pub fn resolve(&self) -> Result<SystemSpec, CliError> {
        let y = self.interarrival.as_deref().ok_or_else(|| CliError::Usage("--Y is required".into()))?;
        let y = parse_dist(y)?;
        let s = self.service_dist()?.ok_or_else(|| CliError::Usage("one of --S or --gamma is required".into()))?;
        Ok(SystemSpec::new(self.discipline.into(), y, s))
    }

    fn service_dist(&self) -> Result<Option<DiscreteDist>, CliError> {
        Ok(match (&self.service, self.gamma) {
            (Some(s), None) => Some(parse_dist(s)?),
            (None, Some(g)) => Some(DiscreteDist::geometric(g)?),
            (None, None) => None,
            (Some(_), Some(_)) => return Err(CliError::Usage("--S and --gamma are mutually exclusive".into())),
        })
    }
}

impl From<DisciplineArg> for Discipline {
    fn from(d: DisciplineArg) -> Self {
        match d {
            DisciplineArg::Preemptive => Discipline::Preemptive,
            DisciplineArg::Nonpreemptive => Discipline::NonPreemptive,
        }
    }
}

fn base_row(engine: &str, spec: &SystemSpec, a: &AoIDistribution) -> EngineRow {
    EngineRow {
        engine: engine.into(),
        discipline: spec.discipline.as_str().into(),
        interarrival: format_dist(&spec.interarrival),
        service: format_dist(&spec.service),
        mean: a.mean,
        mean_lower: a.mean_bounds.map(|b| b.0),
        mean_upper: a.mean_bounds.map(|b| b.1),
        closed_form_mean: None,
        formula: None,
        captured_mass: a.captured_mass,
        tail_bound: Some(a.tail_bound),
        std_error: None,
        work: None,
        note: None,
    }
}

pub fn run_analytic(spec: &SystemSpec, order: usize) -> Result<(EngineRow, AoIDistribution), CliError> {
    let AnalyticSolution { distribution, pgf_formula, closed_form_mean } = analytic::solve(spec, order)?;
    let mut row = base_row("analytic", spec, &distribution);
    row.formula = Some(match closed_form_mean {
        Some((f, _)) if f != pgf_formula => format!("{} (mean: {})", pgf_formula.name(), f.name()),
        _ => pgf_formula.name().into(),
    });
    row.closed_form_mean = closed_form_mean.map(|(_, m)| m);
    if !distribution.is_certified() {
        row.note = Some("tail not certified; mean is a lower bound".into());
    }
    Ok((row.rounded(), distribution))
}

/// Default truncation level of the chain.
///
/// Geometric inputs get the full cap; finite ones get twenty times the
/// longest interarrival plus the mean service time.
pub fn default_n_max(spec: &SystemSpec) -> usize {
    let cap = match spec.discipline {
        Discipline::Preemptive => 400,
        // The non-preemptive space grows cubically.
        Discipline::NonPreemptive => 200,
    };
    // Unbounded support means a geometric distribution with rate below one.
    if spec.interarrival.support_max().is_none() || spec.service.support_max().is_none() {
        return cap;
    }
    let k = spec.interarrival.support_max().unwrap_or(1);
    let scale = 20.0 * (k as f64 + spec.service.mean());
    (scale.ceil() as usize).clamp(40, cap)
}

pub fn run_chain(
    spec: &SystemSpec,
    args: &ChainArgs,
    edges: Option<&std::path::Path>,
) -> Result<(EngineRow, AoIDistribution), CliError> {
    let n_max = args.nmax.unwrap_or_else(|| default_n_max(spec));
    let opts = SolveOptions {
        tol: args.tol,
        max_iters: args.max_iters,
        method: if args.power { Method::Power } else { Method::GaussSeidel },
    };
    let (y, s) = (&spec.interarrival, &spec.service);
    let (a, iterations, balance, edge_text) = match spec.discipline {
        Discipline::Preemptive => {
            let model = chain::build_preemptive(y, s, n_max)?;
            let pi = chain::stationary_with(&model, opts)?;
            let balance = chain::BalanceEquations::residuals(&model, &pi);
            let text = edges.map(|_| chain::edge_list(&model));
            (chain::aoi_marginal(&model, &pi), pi.iterations, balance, text)
        }
        Discipline::NonPreemptive => {
            let model = chain::build_nonpreemptive_general(y, s, n_max)?;
            let pi = chain::stationary_with(&model, opts)?;
            let balance = chain::BalanceEquations::residuals(&model, &pi);
            let text = edges.map(|_| chain::edge_list(&model));
            (chain::aoi_marginal(&model, &pi), pi.iterations, balance, text)
        }
    };
    if let (Some(path), Some(text)) = (edges, edge_text) {
        std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    let mut row = base_row("chain", spec, &a);
    row.work = Some(iterations as u64);
    row.note = Some(format!("n_max={n_max}; balance residual {balance:.3e}"));
    Ok((row.rounded(), a))
}

pub fn sim_config(spec: &SystemSpec, args: &SimArgs) -> SimConfig {
    let mut config = SimConfig::new(spec.clone(), args.slots, args.seed, args.reps);
    if let Some(w) = args.warmup {
        config.warmup = w;
    }
    config
}

pub fn run_sim(spec: &SystemSpec, args: &SimArgs) -> Result<(EngineRow, SimResult), CliError> {
    let r = sim::simulate(&sim_config(spec, args))?;
    let row = EngineRow {
        engine: "sim".into(),
        discipline: spec.discipline.as_str().into(),
        interarrival: format_dist(&spec.interarrival),
        service: format_dist(&spec.service),
        mean: r.mean,
        mean_lower: None,
        mean_upper: None,
        closed_form_mean: None,
        formula: None,
        captured_mass: r.pmf.iter().sum(),
        tail_bound: None,
        std_error: r.std_error,
        work: Some(r.recorded_slots),
        note: Some(format!("seed={}; {}", args.seed, sim::RNG_ALGORITHM)),
    };
    Ok((row.rounded(), r))
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (1..len)
        .map(|n| (a.get(n).copied().unwrap_or(0.0) - b.get(n).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

pub fn run_compare(
    spec: &SystemSpec,
    series: &SeriesArgs,
    chain_args: &ChainArgs,
    sim_args: &SimArgs,
    tol: &CompareArgs,
) -> Result<(Vec<EngineRow>, Vec<CompareRow>), CliError> {
    let mut engines: Vec<(EngineRow, Vec<f64>)> = Vec::new();
    if spec.check_analytic().is_ok() {
        let (row, a) = run_analytic(spec, series.order)?;
        engines.push((row, a.pmf));
    }
    let (row, a) = run_chain(spec, chain_args, None)?;
    engines.push((row, a.pmf));
    if !tol.no_sim {
        let (row, r) = run_sim(spec, sim_args)?;
        engines.push((row, r.pmf));
    }
    if engines.len() < 2 {
        return Err(CliError::Usage("fewer than two engines apply to this system".into()));
    }
    let mut rows = Vec::new();
    for i in 0..engines.len() {
        for j in i + 1..engines.len() {
            let (l, lp) = &engines[i];
            let (r, rp) = &engines[j];
            let sim_se = [l, r].iter().find_map(|e| (e.engine == "sim").then_some(e.std_error)).flatten();
            let is_sim = l.engine == "sim" || r.engine == "sim";
            let (mean_tolerance, pmf_tolerance) = if is_sim {
                (sim_se.map_or(tol.mean_tol, |se| tol.sigmas * se), tol.sim_pmf_tol)
            } else {
                (tol.mean_tol, tol.pmf_tol)
            };
            let mean_gap = (l.mean - r.mean).abs();
            let pmf_gap = linf(lp, rp);
            rows.push(
                CompareRow {
                    left: l.engine.clone(),
                    right: r.engine.clone(),
                    left_mean: l.mean,
                    right_mean: r.mean,
                    mean_gap,
                    mean_tolerance,
                    pmf_gap,
                    pmf_tolerance,
                    pass: mean_gap <= mean_tolerance && pmf_gap <= pmf_tolerance,
                }
                .rounded(),
            );
        }
    }
    Ok((engines.into_iter().map(|e| e.0).collect(), rows))
}

/// Parameter values of a sweep grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridPoint {
    pub p: Option<f64>,
    pub gamma: Option<f64>,
}

pub const MAX_GRID_POINTS: usize = 10_000;

/// Parses `name=start:stop:step` axes and forms their product, in order.
pub fn grid_points(specs: &[String]) -> Result<Vec<GridPoint>, CliError> {
    let usage = |m: String| CliError::Usage(m);
    if specs.is_empty() {
        return Err(usage("empty grid".into()));
    }
    let mut points = vec![GridPoint::default()];
    let mut seen = Vec::new();
    for spec in specs {
        let (name, range) = spec.split_once('=').ok_or_else(|| usage(format!("grid `{spec}` is not name=start:stop:step")))?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| usage(format!("grid `{spec}` has a non-numeric bound")))?;
        let [start, stop, step] = parts[..] else {
            return Err(usage(format!("grid `{spec}` is not name=start:stop:step")));
        };
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(usage(format!("grid `{spec}` is empty")));
        }
        let count = ((stop - start) / step + 1e-9).floor() + 1.0;
        if count * points.len() as f64 > MAX_GRID_POINTS as f64 {
            return Err(usage(format!("grid has more than {MAX_GRID_POINTS} points")));
        }
        let values: Vec<f64> = (0..count as usize).map(|i| round12(start + i as f64 * step)).collect();
        let name = name.trim();
        if seen.contains(&name) {
            return Err(usage(format!("grid axis `{name}` given twice")));
        }
        seen.push(name);
        let set: fn(&mut GridPoint, f64) = match name {
            "p" => |g, v| g.p = Some(v),
            "gamma" => |g, v| g.gamma = Some(v),
            other => return Err(usage(format!("unknown grid axis `{other}` (expected p or gamma)"))),
        };
        points = points
            .iter()
            .flat_map(|base| {
                values.iter().map(move |v| {
                    let mut g = *base;
                    set(&mut g, *v);
                    g
                })
            })
            .collect();
    }
    Ok(points)
}

pub fn run_sweep(
    system: &SystemArgs,
    points: &[GridPoint],
    series: &SeriesArgs,
    chain_args: Option<&ChainArgs>,
    sim_args: Option<&SimArgs>,
) -> Result<Vec<SweepRow>, CliError> {
    let specs = points
        .iter()
        .map(|g| {
            let y = match (g.p, &system.interarrival) {
                (Some(p), _) => DiscreteDist::geometric(p)?,
                (None, Some(y)) => parse_dist(y)?,
                (None, None) => return Err(CliError::Usage("--Y is required unless p is swept".into())),
            };
            let s = match (g.gamma, system.service_dist()?) {
                (Some(gamma), _) => DiscreteDist::geometric(gamma)?,
                (None, Some(s)) => s,
                (None, None) => return Err(CliError::Usage("--S or --gamma is required unless gamma is swept".into())),
            };
            Ok(SystemSpec::new(system.discipline.into(), y, s))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    specs
        .par_iter()
        .map(|spec| {
            let mean_analytic = match analytic::closed_form_mean(spec) {
                Ok(Some((_, m))) => Some(m),
                Ok(None) => Some(analytic::solve(spec, series.order)?.distribution.mean),
                Err(aoi_core::Error::Unsupported(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let mean_chain = chain_args.map(|c| run_chain(spec, c, None).map(|r| r.1.mean)).transpose()?;
            let (mean_sim, sim_std_error) = match sim_args {
                Some(a) => {
                    let r = sim::simulate(&sim_config(spec, a))?;
                    (Some(r.mean), r.std_error)
                }
                None => (None, None),
            };
            Ok(SweepRow {
                p: spec.interarrival.geometric_rate(),
                gamma: spec.service.geometric_rate(),
                mean_analytic,
                mean_chain,
                mean_sim,
                sim_std_error,
            }
            .rounded())
        })
        .collect()
}
