//! Command-line front end: argument parsing, dispatch and CSV/JSON emission.
//!
//! Mode indices on the command line are 1-based; everything behind this
//! module is 0-based. Exit codes: 0 success, 1 usage error, 2 domain, spec
//! or I/O error, 3 internal-consistency error (including a failed
//! `--verify`).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decompose::interference_orders;
use crate::engine::{event_probability, full_distribution, EventSpec};
use crate::linalg::{beamsplitter, fourier_unitary, random_unitary, ComplexMatrix};
use crate::model::{
    enumerate_occupations, gram_from_positions, uniform_gram, AssignmentList, GramMatrix,
    OccupationVector, SourceConfig, Statistics,
};
use crate::oracle::engine_deviation;
use crate::scenarios::{
    bjork_scan, boson_fourier_scan, double_slit_scan, fermion_fourier_scan, hom_scan_with,
    linspace, TransitionCurve,
};
use crate::{Error, Result};

/// Largest engine–oracle deviation tolerated by `--verify`.
pub const VERIFY_TOL: f64 = 1e-9;
/// Significant digits kept in emitted floats.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "interference",
    version,
    about = "Transition probabilities of partially distinguishable bosons and fermions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability of a single output event
    Prob {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        gram: GramArgs,
        /// Output occupation vector, e.g. 1,1,0
        #[arg(long)]
        output: String,
        /// Cross-check against the first-quantized oracle (N ≤ 3, m ≤ 9)
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Probabilities of every output event
    Dist {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        gram: GramArgs,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Event probabilities along a uniform-overlap or displacement grid
    Scan {
        #[command(flatten)]
        setup: SetupArgs,
        /// Scanned parameter
        #[arg(long, value_enum, default_value_t = ScanParameter::Alpha)]
        param: ScanParameter,
        /// start:stop:count
        #[arg(long, default_value = "0:1:11")]
        grid: String,
        /// Coherence length for `--param x` (particles at 0, x, 2x, …)
        #[arg(long, default_value_t = 1.0)]
        lc: f64,
        /// Output occupation vector; repeat for several, omit for all
        #[arg(long = "output")]
        outputs: Vec<String>,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Interference-order coefficients C_d of one event
    Decompose {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long)]
        output: String,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Preset scenarios
    Scenario {
        #[command(subcommand)]
        which: Scenario,
    },
}

#[derive(Debug, Subcommand)]
pub enum Scenario {
    /// Single particle, two slits; scans the relative phase
    Doubleslit {
        /// Degree of coherence between the two paths
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Phase grid start:stop:count (default 0 to 2π, 101 points)
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Hong-Ou-Mandel coincidence versus displacement
    Hom {
        #[arg(long, default_value_t = 1.0)]
        lc: f64,
        #[arg(long, default_value = "0:5:201")]
        grid: String,
        #[arg(long, value_enum, default_value_t = StatsArg::Boson)]
        stats: StatsArg,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Three fermions in a 9-mode Fourier multiport, inputs 3,6,9
    Fermion9 {
        #[command(flatten)]
        fourier: FourierScanArgs,
    },
    /// Three bosons in a 9-mode Fourier multiport, inputs 3,6,9
    Boson9 {
        #[command(flatten)]
        fourier: FourierScanArgs,
    },
    /// Rotated single photon projected on a fixed polarization
    Bjork {
        /// γ grid start:stop:count (default 0 to π/2, 101 points)
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        emit: EmitArgs,
    },
}

#[derive(Debug, Args)]
pub struct FourierScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lc: f64,
    /// Displacement grid start:stop:count
    #[arg(long, default_value = "0:5:201")]
    pub grid: String,
    /// Output occupation vector; repeat for several
    #[arg(long = "event")]
    pub events: Vec<String>,
    #[command(flatten)]
    pub emit: EmitArgs,
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    /// fourier | beamsplitter[:T] | file:PATH | random:SEED
    #[arg(long)]
    pub unitary: String,
    /// Mode count (required for fourier and random)
    #[arg(long)]
    pub m: Option<usize>,
    /// Input modes, 1-based, one per particle
    #[arg(long, value_delimiter = ',', required = true)]
    pub input: Vec<usize>,
    #[arg(long, value_enum, default_value_t = StatsArg::Boson)]
    pub stats: StatsArg,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    /// Uniform pairwise overlap
    #[arg(long, conflicts_with_all = ["positions", "gram_file"])]
    pub alpha: Option<f64>,
    /// Particle displacements
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "gram_file")]
    pub positions: Option<Vec<f64>>,
    /// Coherence length used with --positions
    #[arg(long, default_value_t = 1.0)]
    pub lc: f64,
    /// Gram matrix file (same layout as unitary files)
    #[arg(long)]
    pub gram_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to FILE instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsArg {
    Boson,
    Fermion,
}

impl From<StatsArg> for Statistics {
    fn from(s: StatsArg) -> Self {
        match s {
            StatsArg::Boson => Statistics::Boson,
            StatsArg::Fermion => Statistics::Fermion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParameter {
    Alpha,
    X,
}

/// Scan grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::Usage(format!("grid '{text}' is not start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let grid = Self {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            stop: parts[1].trim().parse().map_err(|_| bad())?,
            count: parts[2].trim().parse().map_err(|_| bad())?,
        };
        let single = grid.count == 1 && grid.start == grid.stop;
        if !single && (grid.count < 2 || !(grid.start < grid.stop)) {
            return Err(Error::Usage(format!(
                "grid '{text}' needs count ≥ 2 and start < stop, or a:a:1"
            )));
        }
        if !grid.start.is_finite() || !grid.stop.is_finite() {
            return Err(bad());
        }
        Ok(grid)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        linspace(self.start, self.stop, self.count)
    }
}

/// Echo of everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub scenario: Option<String>,
    pub modes: Option<usize>,
    pub particles: Option<usize>,
    pub unitary: Option<String>,
    /// 1-based, as given.
    pub input: Option<Vec<usize>>,
    pub statistics: Option<Statistics>,
    pub gram: Option<String>,
    pub coherence_length: Option<f64>,
    pub alpha: Option<f64>,
    pub events: Vec<String>,
    pub parameter: Option<ScanParameter>,
    pub grid: Option<Grid>,
    pub format: Format,
    pub verify: bool,
}

impl RunConfig {
    fn new(subcommand: &str, format: Format) -> Self {
        Self {
            subcommand: subcommand.into(),
            scenario: None,
            modes: None,
            particles: None,
            unitary: None,
            input: None,
            statistics: None,
            gram: None,
            coherence_length: None,
            alpha: None,
            events: Vec::new(),
            parameter: None,
            grid: None,
            format,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config: RunConfig,
    /// Events with an interior extremum along the scanned parameter.
    pub nonmonotonic_events: Option<Vec<String>>,
    /// Largest engine–oracle deviation when `--verify` was requested.
    pub verify_max_deviation: Option<f64>,
}

/// One emitted row. For `decompose`, `parameter` is the interference order
/// `d` and `probability` the coefficient `C_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub parameter: Option<f64>,
    pub event: String,
    pub probability: f64,
}

impl Record {
    pub fn new(parameter: Option<f64>, event: impl Into<String>, probability: f64) -> Self {
        Self {
            parameter: parameter.map(round_significant),
            event: event.into(),
            probability: round_significant(probability),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub data: Vec<Record>,
}

impl Report {
    fn new(config: RunConfig, seed: Option<u64>, data: Vec<Record>) -> Self {
        Self {
            meta: Meta {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed,
                config,
                nonmonotonic_events: None,
                verify_max_deviation: None,
            },
            data,
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    let text = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    text.parse::<f64>().unwrap_or(x) + 0.0
}

fn format_float(x: f64) -> String {
    let x = round_significant(x);
    if x == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Serializes a report. CSV carries only the data rows; JSON carries the
/// full metadata as well.
pub fn emit(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::from("parameter,event,probability\n");
            for r in &report.data {
                let param = r.parameter.map(format_float).unwrap_or_default();
                writeln!(out, "{param},{},{}", r.event, format_float(r.probability))
                    .expect("writing to String");
            }
            Ok(out)
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report)
                .map_err(|e| Error::Consistency(format!("JSON serialization failed: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and writes its output.
pub fn execute(cli: Cli) -> Result<()> {
    let (report, emit_args) = run(cli)?;
    let text = emit(&report, emit_args.format)?;
    match &emit_args.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Runs a parsed command, returning the report without writing it.
pub fn run(cli: Cli) -> Result<(Report, EmitArgs)> {
    match cli.command {
        Command::Prob {
            setup,
            gram,
            output,
            verify,
            emit,
        } => {
            let mut config = RunConfig::new("prob", emit.format);
            let problem = Problem::build(&setup, &mut config)?;
            let gram = build_gram(&gram, problem.input.len(), &mut config)?;
            let event = parse_event(&output, problem.unitary.rows())?;
            config.events = vec![event.label()];
            config.verify = verify;
            let spec = EventSpec::new(
                problem.unitary.clone(),
                problem.input.clone(),
                event.clone(),
                gram.clone(),
                problem.statistics,
            )?;
            let p = event_probability(&spec)?;
            let mut report = Report::new(
                config,
                problem.seed,
                vec![Record::new(None, event.label(), p)],
            );
            if verify {
                report.meta.verify_max_deviation = Some(run_verify(&problem, &gram)?);
            }
            Ok((report, emit))
        }
        Command::Dist {
            setup,
            gram,
            verify,
            emit,
        } => {
            let mut config = RunConfig::new("dist", emit.format);
            let problem = Problem::build(&setup, &mut config)?;
            let gram = build_gram(&gram, problem.input.len(), &mut config)?;
            config.verify = verify;
            let dist =
                full_distribution(&problem.unitary, &problem.input, &gram, problem.statistics)?;
            let data = dist
                .iter()
                .map(|(occ, p)| Record::new(None, occ.label(), *p))
                .collect();
            let mut report = Report::new(config, problem.seed, data);
            if verify {
                report.meta.verify_max_deviation = Some(run_verify(&problem, &gram)?);
            }
            Ok((report, emit))
        }
        Command::Scan {
            setup,
            param,
            grid,
            lc,
            outputs,
            emit,
        } => {
            let mut config = RunConfig::new("scan", emit.format);
            let problem = Problem::build(&setup, &mut config)?;
            let grid = Grid::parse(&grid)?;
            config.grid = Some(grid);
            config.parameter = Some(param);
            let m = problem.unitary.rows();
            let n = problem.input.len();
            let events: Vec<OccupationVector> = if outputs.is_empty() {
                enumerate_occupations(m, n)
            } else {
                outputs
                    .iter()
                    .map(|o| parse_event(o, m))
                    .collect::<Result<_>>()?
            };
            config.events = events.iter().map(OccupationVector::label).collect();
            if param == ScanParameter::X {
                config.coherence_length = Some(lc);
            }
            let curve = generic_scan(&problem, param, lc, &grid.values()?, &events)?;
            Ok((curve_report(config, problem.seed, &curve, true), emit))
        }
        Command::Decompose {
            setup,
            output,
            emit,
        } => {
            let mut config = RunConfig::new("decompose", emit.format);
            let problem = Problem::build(&setup, &mut config)?;
            let event = parse_event(&output, problem.unitary.rows())?;
            config.events = vec![event.label()];
            let result =
                interference_orders(&problem.unitary, &problem.input, &event, problem.statistics)?;
            let data = result
                .coefficients()
                .iter()
                .map(|(&d, &c)| Record::new(Some(d as f64), event.label(), c))
                .collect();
            Ok((Report::new(config, problem.seed, data), emit))
        }
        Command::Scenario { which } => run_scenario(which),
    }
}

fn run_scenario(which: Scenario) -> Result<(Report, EmitArgs)> {
    match which {
        Scenario::Doubleslit { alpha, grid, emit } => {
            let mut config = RunConfig::new("scenario", emit.format);
            config.scenario = Some("doubleslit".into());
            config.alpha = Some(alpha);
            let grid = match grid {
                Some(g) => Grid::parse(&g)?,
                None => Grid {
                    start: 0.0,
                    stop: 2.0 * PI,
                    count: 101,
                },
            };
            config.grid = Some(grid);
            let curve = double_slit_scan(alpha, &grid.values()?)?;
            Ok((curve_report(config, None, &curve, false), emit))
        }
        Scenario::Hom {
            lc,
            grid,
            stats,
            emit,
        } => {
            let mut config = RunConfig::new("scenario", emit.format);
            config.scenario = Some("hom".into());
            let grid = Grid::parse(&grid)?;
            config.grid = Some(grid);
            config.coherence_length = Some(lc);
            config.statistics = Some(stats.into());
            config.modes = Some(2);
            config.particles = Some(2);
            config.input = Some(vec![1, 2]);
            config.unitary = Some("beamsplitter:0.5".into());
            let curve = hom_scan_with(lc, &grid.values()?, stats.into())?;
            Ok((curve_report(config, None, &curve, false), emit))
        }
        Scenario::Fermion9 { fourier } => fourier_scenario(fourier, Statistics::Fermion),
        Scenario::Boson9 { fourier } => fourier_scenario(fourier, Statistics::Boson),
        Scenario::Bjork { grid, emit } => {
            let mut config = RunConfig::new("scenario", emit.format);
            config.scenario = Some("bjork".into());
            let grid = match grid {
                Some(g) => Grid::parse(&g)?,
                None => Grid {
                    start: 0.0,
                    stop: FRAC_PI_2,
                    count: 101,
                },
            };
            config.grid = Some(grid);
            let curve = bjork_scan(&grid.values()?)?;
            Ok((curve_report(config, None, &curve, false), emit))
        }
    }
}

fn fourier_scenario(args: FourierScanArgs, statistics: Statistics) -> Result<(Report, EmitArgs)> {
    let mut config = RunConfig::new("scenario", args.emit.format);
    config.scenario = Some(
        match statistics {
            Statistics::Fermion => "fermion9",
            Statistics::Boson => "boson9",
        }
        .into(),
    );
    let grid = Grid::parse(&args.grid)?;
    config.grid = Some(grid);
    config.coherence_length = Some(args.lc);
    config.statistics = Some(statistics);
    config.modes = Some(crate::scenarios::FOURIER_MODES);
    config.particles = Some(crate::scenarios::FOURIER_INPUTS.len());
    config.input = Some(
        crate::scenarios::FOURIER_INPUTS
            .iter()
            .map(|r| r + 1)
            .collect(),
    );
    config.unitary = Some("fourier".into());
    config.parameter = Some(ScanParameter::X);
    let events = args
        .events
        .iter()
        .map(|e| parse_event(e, crate::scenarios::FOURIER_MODES))
        .collect::<Result<Vec<_>>>()?;
    config.events = events.iter().map(OccupationVector::label).collect();
    let xs = grid.values()?;
    let curve = match statistics {
        Statistics::Fermion => fermion_fourier_scan(args.lc, &xs, &events)?,
        Statistics::Boson => boson_fourier_scan(args.lc, &xs, &events)?,
    };
    Ok((curve_report(config, None, &curve, true), args.emit))
}

fn curve_report(
    config: RunConfig,
    seed: Option<u64>,
    curve: &TransitionCurve,
    flag_extrema: bool,
) -> Report {
    let data = curve
        .samples
        .iter()
        .map(|s| Record::new(Some(s.parameter), s.event.clone(), s.probability))
        .collect();
    let mut report = Report::new(config, seed, data);
    if flag_extrema {
        report.meta.nonmonotonic_events = Some(curve.nonmonotonic_events());
    }
    report
}

fn generic_scan(
    problem: &Problem,
    param: ScanParameter,
    lc: f64,
    values: &[f64],
    events: &[OccupationVector],
) -> Result<TransitionCurve> {
    use rayon::prelude::*;
    let n = problem.input.len();
    let rows: Vec<Vec<f64>> = values
        .par_iter()
        .map(|&v| {
            let gram = match param {
                ScanParameter::Alpha => uniform_gram(n, v)?,
                ScanParameter::X => {
                    gram_from_positions(&SourceConfig::evenly_delayed(n, v, lc)?)?
                }
            };
            events
                .iter()
                .map(|e| {
                    event_probability(&EventSpec::new(
                        problem.unitary.clone(),
                        problem.input.clone(),
                        e.clone(),
                        gram.clone(),
                        problem.statistics,
                    )?)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let name = match param {
        ScanParameter::Alpha => "alpha",
        ScanParameter::X => "x",
    };
    let mut curve = TransitionCurve::new(name);
    for (&v, row) in values.iter().zip(rows) {
        curve.push_point(v, events.iter().map(OccupationVector::label).zip(row).collect())?;
    }
    Ok(curve)
}

fn run_verify(problem: &Problem, gram: &GramMatrix) -> Result<f64> {
    let (deviation, total) =
        engine_deviation(&problem.unitary, &problem.input, gram, problem.statistics)?;
    eprintln!("verify: max |engine - oracle| = {deviation:e}, oracle total = {total}");
    if !(deviation <= VERIFY_TOL) {
        return Err(Error::Consistency(format!(
            "engine and oracle differ by {deviation:e} (> {VERIFY_TOL:e})"
        )));
    }
    Ok(round_significant(deviation))
}

struct Problem {
    unitary: ComplexMatrix,
    input: AssignmentList,
    statistics: Statistics,
    seed: Option<u64>,
}

impl Problem {
    fn build(args: &SetupArgs, config: &mut RunConfig) -> Result<Self> {
        let (unitary, seed) = parse_unitary(&args.unitary, args.m)?;
        let m = unitary.rows();
        let input = parse_input(&args.input, m)?;
        config.modes = Some(m);
        config.particles = Some(input.len());
        config.unitary = Some(args.unitary.clone());
        config.input = Some(args.input.clone());
        config.statistics = Some(args.stats.into());
        Ok(Self {
            unitary,
            input,
            statistics: args.stats.into(),
            seed,
        })
    }
}

fn build_gram(args: &GramArgs, n: usize, config: &mut RunConfig) -> Result<GramMatrix> {
    if let Some(alpha) = args.alpha {
        config.gram = Some(format!("uniform:{alpha}"));
        config.alpha = Some(alpha);
        return uniform_gram(n, alpha);
    }
    if let Some(positions) = &args.positions {
        if positions.len() != n {
            return Err(Error::Usage(format!(
                "{} positions for {n} particles",
                positions.len()
            )));
        }
        config.gram = Some(format!(
            "positions:{}",
            positions
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
        config.coherence_length = Some(args.lc);
        return gram_from_positions(&SourceConfig::new(positions.clone(), args.lc)?);
    }
    if let Some(path) = &args.gram_file {
        config.gram = Some(format!("file:{}", path.display()));
        let gram = GramMatrix::new(read_matrix_file(path)?)?;
        if gram.dim() != n {
            return Err(Error::Spec(format!(
                "Gram file is {0}x{0} for {n} particles",
                gram.dim()
            )));
        }
        return Ok(gram);
    }
    config.gram = Some("indistinguishable".into());
    Ok(GramMatrix::all_ones(n))
}

/// Parses a unitary spec. Returns the matrix and the seed, if random.
pub fn parse_unitary(spec: &str, m: Option<usize>) -> Result<(ComplexMatrix, Option<u64>)> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let need_m = || m.ok_or_else(|| Error::Usage(format!("--unitary {kind} requires --m")));
    let (u, seed) = match kind {
        "fourier" => (fourier_unitary(need_m()?)?, None),
        "beamsplitter" => {
            let t = match arg {
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| Error::Usage(format!("bad transmissivity '{a}'")))?,
                None => 0.5,
            };
            (beamsplitter(t)?, None)
        }
        "file" => {
            let path = arg.ok_or_else(|| Error::Usage("use --unitary file:PATH".into()))?;
            (read_matrix_file(Path::new(path))?, None)
        }
        "random" => {
            let seed = arg
                .ok_or_else(|| Error::Usage("random unitary requires a seed: random:SEED".into()))?
                .parse::<u64>()
                .map_err(|_| Error::Usage(format!("bad seed in '{spec}'")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_unitary(need_m()?, &mut rng)?, Some(seed))
        }
        other => return Err(Error::Usage(format!("unknown unitary '{other}'"))),
    };
    if let Some(m) = m {
        if m != u.rows() {
            return Err(Error::Usage(format!(
                "--m {m} conflicts with a {}-mode unitary",
                u.rows()
            )));
        }
    }
    if !u.is_unitary() {
        return Err(Error::Domain(format!(
            "matrix is not unitary (defect {:e})",
            u.unitarity_defect()?
        )));
    }
    Ok((u, seed))
}

/// Converts 1-based CLI mode indices to an assignment list.
pub fn parse_input(one_based: &[usize], m: usize) -> Result<AssignmentList> {
    let modes = one_based
        .iter()
        .map(|&r| {
            if r == 0 || r > m {
                Err(Error::Usage(format!("input mode {r} outside 1..={m}")))
            } else {
                Ok(r - 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AssignmentList::new(modes)
}

fn parse_event(text: &str, m: usize) -> Result<OccupationVector> {
    let occ = OccupationVector::parse(text)?;
    if occ.modes() != m {
        return Err(Error::Usage(format!(
            "event '{text}' has {} entries for {m} modes",
            occ.modes()
        )));
    }
    Ok(occ)
}

/// Reads a square matrix: first line the dimension, then one row per line of
/// whitespace-separated `re,im` pairs.
pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_text(&text)
}

pub fn parse_matrix_text(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let dim: usize = lines
        .next()
        .ok_or_else(|| Error::Usage("empty matrix file".into()))?
        .parse()
        .map_err(|_| Error::Usage("first line must be the dimension".into()))?;
    let mut rows = Vec::with_capacity(dim);
    for (i, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|pair| {
                let (re, im) = pair.split_once(',').unwrap_or((pair, "0"));
                match (re.parse::<f64>(), im.parse::<f64>()) {
                    (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                    _ => Err(Error::Usage(format!("bad entry '{pair}' on row {}", i + 1))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {dim}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(Error::Dimension(format!("{} rows, expected {dim}", rows.len())));
    }
    ComplexMatrix::from_rows(&rows)
}

/// Writes a matrix in the layout read by [`read_matrix_file`].
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_significant(6.0 / 729.0), 0.0082304526749);
        assert_eq!(round_significant(-0.0), 0.0);
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.5e-17), "2.5e-17");
    }

    #[test]
    fn grid_parsing() {
        let g = Grid::parse("0:5:201").unwrap();
        assert_eq!((g.start, g.stop, g.count), (0.0, 5.0, 201));
        assert!(Grid::parse("0:5").is_err());
        assert!(Grid::parse("5:0:10").is_err());
        assert!(Grid::parse("0:5:1").is_err());
    }

    #[test]
    fn input_is_one_based() {
        assert_eq!(parse_input(&[3, 6, 9], 9).unwrap().modes(), &[2, 5, 8]);
        assert!(parse_input(&[0, 1], 9).is_err());
        assert!(parse_input(&[10], 9).is_err());
    }

    #[test]
    fn unitary_specs() {
        assert_eq!(parse_unitary("fourier", Some(4)).unwrap().0.rows(), 4);
        assert!(matches!(parse_unitary("fourier", None), Err(Error::Usage(_))));
        assert!(matches!(parse_unitary("random", Some(3)), Err(Error::Usage(_))));
        let (a, seed) = parse_unitary("random:17", Some(3)).unwrap();
        let (b, _) = parse_unitary("random:17", Some(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(seed, Some(17));
        assert!(matches!(parse_unitary("beamsplitter:2", None), Err(Error::Domain(_))));
        assert!(matches!(parse_unitary("beamsplitter", Some(3)), Err(Error::Usage(_))));
        assert!(matches!(parse_unitary("hadamard", None), Err(Error::Usage(_))));
    }

    #[test]
    fn matrix_text_round_trip() {
        let u = fourier_unitary(3).unwrap();
        let back = parse_matrix_text(&format_matrix(&u)).unwrap();
        for (a, b) in u.entries().iter().zip(back.entries()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(parse_matrix_text("2\n1,0 0,0\n").is_err());
        assert!(parse_matrix_text("2\n1,0 0,0\n0,0 x,1\n").is_err());
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = Report::new(RunConfig::new("dist", Format::Csv), None, Vec::new());
        assert_eq!(emit(&report, Format::Csv).unwrap(), "parameter,event,probability\n");
    }
}
