//! Subcommands of the `slhkit` binary.
//!
//! Handlers return the text destined for stdout so they can be driven
//! directly from tests. Exit codes: 0 success, 1 verification failure,
//! 2 input error, 3 numerical-domain error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use slhkit::phase::wrap_two_pi;
use slhkit::selector::{
    compile_selector, compile_selector_matrix, eval_matrix_product, read_selector, MatrixProductSpec,
    SelectorMatrix, SelectorSpec, SelectorVector,
};
use slhkit::SlhModel;

use crate::angle::{parse_complex, Angle, LiteralError};
use crate::format::{parse_angle_list, parse_angle_matrix, parse_int_list, parse_int_matrix, sig12, sig12_complex};
use crate::netlist::{Netlist, NetlistError};
use crate::schedule::{PhaseSchedule, ScheduleError};
use crate::sweep::{render_csv, SweepGrid};
use crate::verify::{self, Denominator, Scale, VerifyOptions};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error("verification failed")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<slhkit::Error> for CliError {
    fn from(e: slhkit::Error) -> Self {
        use slhkit::Error::*;
        match e {
            SingularLoop { .. } | SingularPoint { .. } | DivergentGain(_) => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LiteralError> for CliError {
    fn from(e: LiteralError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn with_path<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(with_path(path))
}

#[derive(Debug, Parser)]
#[command(name = "slhkit", version, about = "Compose and check SLH models of linear optical circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a binary selector vector or matrix into a phase schedule.
    Compile(CompileArgs),
    /// Evaluate a selector chain or matrix product on memory phases.
    Eval(EvalArgs),
    /// Sweep the weighted selector transfer function to CSV.
    Sweep(SweepArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
    /// Work with netlist files.
    #[command(subcommand)]
    Netlist(NetlistCommand),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CompileArgs {
    /// Selector bits, e.g. `0,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub selector: Option<String>,
    /// Selector matrix rows separated by `;`, e.g. `0,1;1,1;1,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Memory phases for a single chain, e.g. `0.3,0.7,1.1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "memory")]
    pub mu: Option<String>,
    /// Memory phase matrix `M` (n x m), rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub memory: Option<String>,
    /// Selector bits used with `--mu`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["selector_matrix", "schedule"])]
    pub selector: Option<String>,
    /// Selector matrix (n x k) used with `--memory`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "schedule")]
    pub selector_matrix: Option<String>,
    /// Phase schedule file produced by `compile`.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Complex drive amplitude on port 1.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Control phases, comma separated.
    #[arg(long, default_value = "pi/3,pi/2,2pi/3,pi", allow_hyphen_values = true)]
    pub phi: String,
    #[arg(long, default_value = "-pi", allow_hyphen_values = true)]
    pub mu_min: String,
    #[arg(long, default_value = "pi", allow_hyphen_values = true)]
    pub mu_max: String,
    #[arg(long, default_value_t = 401)]
    pub count: usize,
    /// Sample the endpoints instead of cell midpoints.
    #[arg(long)]
    pub inclusive: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ScaleArg::Full)]
    pub scale: ScaleArg,
    /// Run the exhaustive selector sweep at this length only.
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=16))]
    pub exhaustive: Option<u64>,
    /// Use `2 - e^{iμ} + e^{i(φ+μ)}` as the feedback denominator.
    #[arg(long)]
    pub flip_denominator_sign: bool,
}

#[derive(Debug, Subcommand)]
pub enum NetlistCommand {
    /// Print the elaborated S, L and H.
    Elaborate { file: PathBuf },
    /// Print the netlist in canonical form.
    Print { file: PathBuf },
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Compile(a) => compile(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Netlist(NetlistCommand::Elaborate { file }) => elaborate(file),
        Command::Netlist(NetlistCommand::Print { file }) => print_netlist(file),
    }
}

fn selector_vector(text: &str) -> Result<SelectorVector, CliError> {
    Ok(SelectorVector::from_ints(&parse_int_list(text)?)?)
}

fn selector_matrix(text: &str) -> Result<SelectorMatrix, CliError> {
    Ok(SelectorMatrix::from_rows(&parse_int_matrix(text)?)?)
}

pub fn compile(args: &CompileArgs) -> Result<String, CliError> {
    let schedule = match (&args.selector, &args.matrix) {
        (Some(bits), None) => {
            let (phi, tail) = compile_selector(&selector_vector(bits)?);
            PhaseSchedule::Vector { phi, tail }
        }
        (None, Some(rows)) => {
            let s = selector_matrix(rows)?;
            let (columns, tail) = compile_selector_matrix(&s);
            PhaseSchedule::Matrix { rows: s.rows(), columns, tail }
        }
        _ => return Err(CliError::Input("give exactly one of --selector or --matrix".into())),
    };
    Ok(schedule.to_string())
}

fn memory_list(text: &str) -> Result<Vec<f64>, CliError> {
    Ok(parse_angle_list(text)?.into_iter().map(wrap_two_pi).collect())
}

fn memory_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let rows = parse_angle_matrix(text)?;
    let width = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(slhkit::Error::LengthMismatch { expected: width, found: bad.len() }.into());
    }
    Ok(DMatrix::from_fn(rows.len(), width, |i, j| wrap_two_pi(rows[i][j])))
}

fn load_schedule(path: &Path) -> Result<PhaseSchedule, CliError> {
    PhaseSchedule::parse(&read(path)?).map_err(with_path::<ScheduleError>(path))
}

pub fn eval(args: &EvalArgs) -> Result<String, CliError> {
    let alpha = parse_complex(&args.alpha)?;
    let schedule = args.schedule.as_deref().map(load_schedule).transpose()?;
    if let Some(mu) = &args.mu {
        let mu = memory_list(mu)?;
        let spec = match (&args.selector, schedule) {
            (Some(bits), None) => SelectorSpec::from_selector(mu, &selector_vector(bits)?)?,
            (None, Some(PhaseSchedule::Vector { phi, tail })) => SelectorSpec::new(mu, phi, tail)?,
            (None, Some(PhaseSchedule::Matrix { .. })) => {
                return Err(CliError::Input("--mu needs a vector schedule; use --memory for a matrix".into()))
            }
            _ => return Err(CliError::Input("--mu needs --selector or --schedule".into())),
        };
        let r = read_selector(&spec, alpha)?;
        let mut out = String::new();
        writeln!(out, "left: {}", sig12_complex(r.left)).unwrap();
        writeln!(out, "right: {}", sig12_complex(r.right)).unwrap();
        writeln!(out, "mu_out: {}", sig12(r.phase())).unwrap();
        writeln!(out, "residual_power: {}", sig12(r.residual_power())).unwrap();
        return Ok(out);
    }
    let Some(memory) = &args.memory else {
        return Err(CliError::Input("give --mu or --memory".into()));
    };
    let memory = memory_matrix(memory)?;
    let spec = match (&args.selector_matrix, schedule) {
        (Some(rows), None) => MatrixProductSpec::from_selector_matrix(memory, &selector_matrix(rows)?)?,
        (None, Some(PhaseSchedule::Matrix { rows, columns, tail })) => {
            if rows != memory.nrows() {
                return Err(slhkit::Error::LengthMismatch { expected: memory.nrows(), found: rows }.into());
            }
            MatrixProductSpec::new(memory, columns, tail)?
        }
        (None, Some(PhaseSchedule::Vector { .. })) => {
            return Err(CliError::Input("--memory needs a matrix schedule; use --mu for a vector".into()))
        }
        _ => return Err(CliError::Input("--memory needs --selector-matrix or --schedule".into())),
    };
    matrix_report(&spec, alpha)
}

fn matrix_report(spec: &MatrixProductSpec, alpha: Complex64) -> Result<String, CliError> {
    let closed = eval_matrix_product(spec);
    let mut out = String::new();
    writeln!(out, "rows: {}", closed.nrows()).unwrap();
    writeln!(out, "cols: {}", closed.ncols()).unwrap();
    let mut worst: f64 = 0.0;
    let mut phases = DMatrix::zeros(closed.nrows(), closed.ncols());
    for i in 0..closed.nrows() {
        for j in 0..closed.ncols() {
            let r = read_selector(&spec.chain_spec(i, j)?, alpha)?;
            writeln!(
                out,
                "entry {} {}: left {} right {}",
                i + 1,
                j + 1,
                sig12_complex(r.left),
                sig12_complex(r.right)
            )
            .unwrap();
            phases[(i, j)] = r.phase();
            worst = worst.max(r.residual_power());
        }
    }
    for row in phases.row_iter() {
        let cells: Vec<String> = row.iter().map(|&p| sig12(p)).collect();
        writeln!(out, "mu_out: {}", cells.join(" ")).unwrap();
    }
    writeln!(out, "max_residual_power: {}", sig12(worst)).unwrap();
    Ok(out)
}

fn angle(text: &str) -> Result<f64, CliError> {
    Ok(text.parse::<Angle>()?.radians())
}

pub fn sweep(args: &SweepArgs) -> Result<String, CliError> {
    let grid = SweepGrid {
        phis: parse_angle_list(&args.phi)?,
        mu_min: angle(&args.mu_min)?,
        mu_max: angle(&args.mu_max)?,
        count: args.count,
        inclusive: args.inclusive,
    };
    if grid.mu_min >= grid.mu_max {
        return Err(CliError::Input(format!("--mu-min {} must be below --mu-max {}", args.mu_min, args.mu_max)));
    }
    let csv = render_csv(&grid)?;
    match &args.output {
        Some(path) => {
            fs::write(path, csv).map_err(with_path(path))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<String, CliError> {
    let opts = VerifyOptions {
        seed: args.seed,
        scale: match args.scale {
            ScaleArg::Quick => Scale::Quick,
            ScaleArg::Full => Scale::Full,
        },
        exhaustive: args.exhaustive.map(|n| n as usize),
        denominator: if args.flip_denominator_sign { Denominator::SignFlipped } else { Denominator::Corrected },
    };
    let report = verify::run(&opts);
    if report.passed() {
        Ok(report.to_string())
    } else {
        Err(CliError::Verify(report.to_string()))
    }
}

fn load_netlist(path: &Path) -> Result<Netlist, CliError> {
    Netlist::parse(&read(path)?).map_err(with_path::<NetlistError>(path))
}

pub fn describe_model(g: &SlhModel) -> String {
    let mut out = String::new();
    let n = g.ports();
    writeln!(out, "ports: {n}").unwrap();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| sig12_complex(g.scattering()[(i, j)])).collect();
        writeln!(out, "S: {}", row.join(" ")).unwrap();
    }
    let l: Vec<String> = g.coupling().iter().map(|&z| sig12_complex(z)).collect();
    writeln!(out, "L: {}", l.join(" ")).unwrap();
    writeln!(out, "H: {}", sig12(g.hamiltonian())).unwrap();
    out
}

pub fn elaborate(path: &Path) -> Result<String, CliError> {
    Ok(describe_model(&load_netlist(path)?.elaborate()?))
}

pub fn print_netlist(path: &Path) -> Result<String, CliError> {
    Ok(load_netlist(path)?.to_string())
}
