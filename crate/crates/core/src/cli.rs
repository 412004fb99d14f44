//! Command-line front end shared by the `maxmin` binary and the tests.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::coalitions::{shapley, GameInstance, GameTable, ShapleyResult, WeightSystem, WeightSystemKind};
use crate::export::{
    allocation_intervals, sig6, write_allocation_csv, write_game_csv, write_shapley_csv, write_trace_csv,
};
use crate::measures::{coalition_table, Coalition};
use crate::partition::WeightedProblem;
use crate::problem::{Problem, WeightsSpec};
use crate::subgradient::{solve_partition, solve_value, SolveResult, SolverConfig, StepRule};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_UNCONVERGED: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the bracket [lb, ub] on the maxmin value.
    Solve,
    /// Compute an equitable partition and write its intervals.
    Partition,
    /// Tabulate the coalitional game.
    Game,
    /// Shapley values of the coalitional game.
    Shapley,
    /// Write the per-iteration trace of the value solver.
    Trace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Card,
    Pre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "maxmin", version, about = "Maxmin fair division of a one-dimensional cake")]
pub struct RunSpec {
    /// Problem file (JSON).
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, value_enum)]
    pub command: Command,
    /// Coalition structure, e.g. "1,2|3|4,5" (one-based players).
    #[arg(long, conflicts_with = "subset")]
    pub coalitions: Option<String>,
    /// Use the structure {S} plus singletons for this coalition, e.g. "3,5".
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long, value_enum)]
    pub weights: Option<WeightsArg>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of grid cells; overrides the problem file.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub step_scale: Option<f64>,
    #[arg(long)]
    pub clip_k: Option<u32>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Worker threads for coalition solves.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(Error),
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Solver(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::InvalidConfig(_) => EXIT_INVALID_CONFIG,
            CliError::Io(_) => EXIT_IO,
            CliError::Solver(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => CliError::Parse(e),
            Error::Io(io) => CliError::Io(io),
            Error::Csv(_) => CliError::Solver(e),
            Error::InvalidConfig(msg) => CliError::InvalidConfig(msg),
            Error::InvalidStructure(_)
            | Error::EmptyCoalition
            | Error::UnknownPlayer { .. }
            | Error::EmptyGrid
            | Error::InvalidDensity(_) => CliError::InvalidConfig(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

/// Whether every solve behind the written outputs converged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    Unconverged,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Converged => EXIT_OK,
            Outcome::Unconverged => EXIT_UNCONVERGED,
        }
    }

    fn from_flag(converged: bool) -> Self {
        if converged {
            Outcome::Converged
        } else {
            Outcome::Unconverged
        }
    }
}

/// Parses arguments, runs the command and maps the result to an exit code.
pub fn main_with(spec: RunSpec) -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&spec, &mut lock) {
        Ok(outcome) => {
            if outcome == Outcome::Unconverged {
                eprintln!("warning: solver stopped at the iteration limit before reaching the tolerance");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command. The bracket line of `solve` goes to `console`; other
/// outputs go to `--out`, or to `console` when no file is given.
pub fn run(spec: &RunSpec, console: &mut dyn Write) -> Result<Outcome, CliError> {
    let mut problem = Problem::load(&spec.problem)?;
    if let Some(cells) = spec.grid {
        if cells == 0 {
            return Err(CliError::InvalidConfig("--grid must be positive".into()));
        }
        problem.grid_cells = cells;
    }
    let config = solver_config(spec)?;
    match spec.command {
        Command::Solve | Command::Partition | Command::Trace => run_structure(spec, &problem, config, console),
        Command::Game | Command::Shapley => run_game(spec, &problem, &config, console),
    }
}

fn solver_config(spec: &RunSpec) -> Result<SolverConfig, CliError> {
    let mut config = SolverConfig::default();
    if let Some(eps) = spec.epsilon {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CliError::InvalidConfig(format!("--epsilon must be positive, got {eps}")));
        }
        config.epsilon = eps;
    }
    let mut rule = StepRule::default();
    if let Some(scale) = spec.step_scale {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(CliError::InvalidConfig(format!("--step-scale must be positive, got {scale}")));
        }
        rule.scale = scale;
    }
    if let Some(k) = spec.clip_k {
        if k < 2 {
            return Err(CliError::InvalidConfig(format!("--clip-k must be at least 2, got {k}")));
        }
        rule.clip_k = k;
    }
    config.step_rule = rule;
    if let Some(n) = spec.max_iter {
        if n == 0 {
            return Err(CliError::InvalidConfig("--max-iter must be positive".into()));
        }
        config.max_iterations = n;
    }
    if spec.jobs == 0 {
        return Err(CliError::InvalidConfig("--jobs must be positive".into()));
    }
    Ok(config)
}

fn parse_structure(spec: &RunSpec, n: usize) -> Result<Vec<Coalition>, CliError> {
    let structure = if let Some(text) = &spec.coalitions {
        text.split('|').map(|part| part.parse::<Coalition>()).collect::<Result<Vec<_>, _>>()?
    } else if let Some(text) = &spec.subset {
        let s: Coalition = text.parse()?;
        std::iter::once(s).chain((0..n).filter(|&j| !s.contains(j)).map(Coalition::singleton)).collect()
    } else {
        Coalition::singletons(n)
    };
    if let Some(s) = structure.iter().find(|s| s.span() > n) {
        return Err(CliError::InvalidConfig(format!("coalition {s} names a player beyond the {n} in the problem")));
    }
    Ok(structure)
}

/// Weight choice for `solve`/`partition`/`trace`: the flag wins over the file.
fn structure_weights(spec: &RunSpec, problem: &Problem) -> WeightsSpec {
    use crate::problem::WeightSystemName;
    match spec.weights {
        Some(WeightsArg::Card) => WeightsSpec::System(WeightSystemName::Card),
        Some(WeightsArg::Pre) => WeightsSpec::System(WeightSystemName::Pre),
        None => problem.weights.clone().unwrap_or(WeightsSpec::System(WeightSystemName::Card)),
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    coalitions: Vec<String>,
    weights: &'a [f64],
    lower: f64,
    upper: f64,
    converged: bool,
    iterations: usize,
    alpha: &'a [f64],
    u: &'a [f64],
}

fn run_structure(
    spec: &RunSpec,
    problem: &Problem,
    config: SolverConfig,
    console: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let n = problem.player_count();
    let structure = parse_structure(spec, n)?;
    let grid = problem.grid()?;
    let weighted = match structure_weights(spec, problem) {
        WeightsSpec::Explicit(w) => {
            if w.len() != structure.len() {
                return Err(CliError::InvalidConfig(format!(
                    "{} explicit weights for {} coalitions",
                    w.len(),
                    structure.len()
                )));
            }
            let table = coalition_table(&problem.densities(), &structure, &grid)?;
            WeightedProblem::new(&table, structure, w)?
        }
        WeightsSpec::System(name) => match WeightSystemKind::from(name) {
            WeightSystemKind::Cardinality => {
                let table = coalition_table(&problem.densities(), &structure, &grid)?;
                let w = structure.iter().map(|s| s.len() as f64).collect();
                WeightedProblem::new(&table, structure, w)?
            }
            WeightSystemKind::PreDivision => {
                let instance = GameInstance::new(problem.densities(), grid)?;
                let system = instance.weight_system(WeightSystemKind::PreDivision, &config)?;
                instance.weighted_problem(structure, &system)?
            }
        },
    };

    let result = match spec.command {
        Command::Partition => solve_partition(&weighted, &config)?,
        Command::Trace => solve_value(&weighted, &config.clone().with_trace())?,
        _ => solve_value(&weighted, &config)?,
    };
    let outcome = Outcome::from_flag(result.converged);

    match spec.command {
        Command::Solve => {
            writeln!(console, "[{}, {}]", sig6(result.lower), sig6(result.upper))?;
            if spec.out.is_some() {
                write_output(spec, console, Format::Csv, |w, format| write_solve(w, format, &weighted, &result))?;
            }
        }
        Command::Partition => {
            write_output(spec, console, Format::Json, |w, format| match format {
                Format::Csv => write_allocation_csv(w, weighted.grid(), result.allocation(), weighted.coalitions()),
                Format::Json => {
                    let iv = allocation_intervals(weighted.grid(), result.allocation(), weighted.coalitions());
                    write_json(w, &iv)
                }
            })?;
        }
        Command::Trace => {
            let trace = result.trace.as_deref().unwrap_or_default();
            write_output(spec, console, Format::Csv, |w, format| match format {
                Format::Csv => write_trace_csv(w, trace),
                Format::Json => write_json(w, &trace),
            })?;
        }
        Command::Game | Command::Shapley => unreachable!("handled by run_game"),
    }
    Ok(outcome)
}

fn write_solve(
    w: &mut dyn Write,
    format: Format,
    weighted: &WeightedProblem,
    result: &SolveResult,
) -> crate::Result<()> {
    match format {
        Format::Json => write_json(
            w,
            &SolveSummary {
                coalitions: weighted.coalitions().iter().map(|s| s.to_string()).collect(),
                weights: weighted.weights(),
                lower: result.lower,
                upper: result.upper,
                converged: result.converged,
                iterations: result.iterations,
                alpha: result.alpha(),
                u: &result.pvv.values,
            },
        ),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["lower", "upper", "converged", "iterations"])?;
            c.write_record([
                sig6(result.lower),
                sig6(result.upper),
                result.converged.to_string(),
                result.iterations.to_string(),
            ])?;
            c.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GameJson {
    coalition: String,
    eta_card: Option<f64>,
    eta_pre: Option<f64>,
    converged: bool,
}

#[derive(Serialize)]
struct ShapleyJson {
    player: usize,
    sv_card: Option<f64>,
    sv_pre: Option<f64>,
}

fn run_game(
    spec: &RunSpec,
    problem: &Problem,
    config: &SolverConfig,
    console: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if spec.coalitions.is_some() || spec.subset.is_some() {
        return Err(CliError::InvalidConfig("game and shapley take no --coalitions or --subset".into()));
    }
    let instance = GameInstance::from_problem(problem)?;
    let kinds: Vec<WeightSystemKind> = match spec.weights {
        Some(WeightsArg::Card) => vec![WeightSystemKind::Cardinality],
        Some(WeightsArg::Pre) => vec![WeightSystemKind::PreDivision],
        None => vec![WeightSystemKind::Cardinality, WeightSystemKind::PreDivision],
    };
    let mut card: Option<GameTable> = None;
    let mut pre: Option<GameTable> = None;
    for kind in kinds {
        let system: WeightSystem = instance.weight_system(kind, config)?;
        let table = instance.full_game(&system, config, spec.jobs)?;
        match kind {
            WeightSystemKind::Cardinality => card = Some(table),
            WeightSystemKind::PreDivision => pre = Some(table),
        }
    }
    let converged = card.iter().chain(pre.iter()).all(GameTable::all_converged);

    if spec.command == Command::Game {
        write_output(spec, console, Format::Csv, |w, format| match format {
            Format::Csv => write_game_csv(w, card.as_ref(), pre.as_ref()),
            Format::Json => {
                let rows: Vec<GameJson> = Coalition::all_nonempty(instance.player_count())
                    .into_iter()
                    .map(|s| {
                        let c = card.as_ref().and_then(|t| t.get(s));
                        let p = pre.as_ref().and_then(|t| t.get(s));
                        GameJson {
                            coalition: s.to_string(),
                            eta_card: c.map(|e| e.value),
                            eta_pre: p.map(|e| e.value),
                            converged: c.is_none_or(|e| e.converged) && p.is_none_or(|e| e.converged),
                        }
                    })
                    .collect();
                write_json(w, &rows)
            }
        })?;
    } else {
        let sv_card: Option<ShapleyResult> = card.as_ref().map(shapley).transpose()?;
        let sv_pre: Option<ShapleyResult> = pre.as_ref().map(shapley).transpose()?;
        write_output(spec, console, Format::Csv, |w, format| match format {
            Format::Csv => write_shapley_csv(w, sv_card.as_ref(), sv_pre.as_ref()),
            Format::Json => {
                let rows: Vec<ShapleyJson> = (0..instance.player_count())
                    .map(|i| ShapleyJson {
                        player: i + 1,
                        sv_card: sv_card.as_ref().map(|s| s.values[i]),
                        sv_pre: sv_pre.as_ref().map(|s| s.values[i]),
                    })
                    .collect();
                write_json(w, &rows)
            }
        })?;
    }
    Ok(Outcome::from_flag(converged))
}

fn write_json<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> crate::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Writes to `--out` or to `console`. The format comes from `--format`, else
/// the output file extension, else `default`.
fn write_output(
    spec: &RunSpec,
    console: &mut dyn Write,
    default: Format,
    body: impl FnOnce(&mut dyn Write, Format) -> crate::Result<()>,
) -> Result<(), CliError> {
    let format = spec.format.unwrap_or_else(|| match &spec.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        Some(p) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
        _ => default,
    });
    match &spec.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file, format)?;
            file.flush()?;
        }
        None => body(console, format)?,
    }
    Ok(())
}
