//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime or verification failure, 2 on
//! invalid arguments (clap's own parse errors already use 2).

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::metrology::peak_qfi;
use crate::params::DetectorParams;
use crate::sweep::{
    self, figure_curves, format_float, Scale, SweepRow, SweepSpec, Varying, CSV_HEADER,
};
use crate::verify;

/// Width below which the golden-section search stops, in units of β.
pub const PEAK_TOL: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(
    name = "udw",
    version,
    about = "Equilibrium QFI and LQU of two detectors in a de Sitter alpha-vacuum"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one parameter point and print a CSV header and row.
    Point(PointArgs),
    /// Sweep one parameter and write a CSV table.
    Sweep(SweepArgs),
    /// Locate the QFI maximum over beta; prints `beta_star,qfi_star`.
    Peak(PeakArgs),
    /// Write the CSV data behind every published figure curve.
    Figures {
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the oracle suite.
    Verify {
        /// Multiplier applied to every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub beta: f64,
    /// |alpha|; the vacuum parameter is -|alpha|.
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub param: Varying,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// Defaults to log for beta and omega, linear otherwise.
    #[arg(long)]
    pub scale: Option<Scale>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PeakArgs {
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.05)]
    pub from: f64,
    #[arg(long, default_value_t = 30.0)]
    pub to: f64,
}

/// A failed command: the exit code and a one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfDomain { .. }
            | Error::InvalidBracket { .. }
            | Error::StepTooLarge { .. } => Failure::usage(e.to_string()),
            _ => Failure::runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::runtime(e.to_string())
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Point(a) => cmd_point(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Peak(a) => cmd_peak(&a, out),
        Command::Figures { out_dir } => cmd_figures(&out_dir, out),
        Command::Verify { tol } => cmd_verify(tol, out),
    }
}

pub fn cmd_point(a: &PointArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = DetectorParams::with_alpha_abs(a.omega, a.beta, a.alpha, a.tau)?;
    let row = SweepRow::evaluate(&p)?;
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{}", row.to_csv())?;
    Ok(())
}

fn fixed(value: Option<f64>, name: &str, varying: Varying) -> Result<f64, Failure> {
    match value {
        Some(v) => Ok(v),
        // the sweep overwrites it; any admissible placeholder will do
        None if varying.name() == name => Ok(1.0),
        None => Err(Failure::usage(format!(
            "--{} is required when sweeping {varying}",
            match name {
                "alpha_abs" => "alpha",
                n => n,
            }
        ))),
    }
}

pub fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec, Failure> {
    let scale = a.scale.unwrap_or(match a.param {
        Varying::Beta | Varying::Omega => Scale::Log,
        Varying::AlphaAbs | Varying::Tau => Scale::Linear,
    });
    Ok(SweepSpec::new(
        a.param,
        a.from,
        a.to,
        a.steps,
        scale,
        fixed(a.omega, "omega", a.param)?,
        fixed(a.beta, "beta", a.param)?,
        fixed(a.alpha, "alpha_abs", a.param)?,
        fixed(a.tau, "tau", a.param)?,
    )?)
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = sweep_spec(a)?;
    let rows = sweep::run(&spec)?;
    match &a.out {
        Some(path) => write_table(path, &rows),
        None => Ok(sweep::write_csv(&rows, out)?),
    }
}

fn write_table(path: &Path, rows: &[SweepRow]) -> Result<(), Failure> {
    let file =
        File::create(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?;
    sweep::write_csv(rows, BufWriter::new(file))
        .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

pub fn cmd_peak(a: &PeakArgs, out: &mut dyn Write) -> Result<(), Failure> {
    // validates ω, |α| and τ before the search
    let p = DetectorParams::with_alpha_abs(a.omega, a.from.max(f64::MIN_POSITIVE), a.alpha, a.tau)?;
    let peak = peak_qfi(p.omega(), p.alpha(), p.tau(), (a.from, a.to), PEAK_TOL)?;
    writeln!(
        out,
        "{},{}",
        format_float(peak.beta_star),
        format_float(peak.qfi_star)
    )?;
    Ok(())
}

pub fn cmd_figures(dir: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("{}: {e}", dir.display())))?;
    for curve in figure_curves() {
        let rows = sweep::run(&curve.spec()?)?;
        let name = curve.file_name();
        write_table(&dir.join(&name), &rows)?;
        writeln!(out, "{name}")?;
    }
    Ok(())
}

pub fn cmd_verify(tol: f64, out: &mut dyn Write) -> Result<(), Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::usage(format!(
            "--tol must be a positive multiplier, got {tol}"
        )));
    }
    let report = verify::run(tol);
    write!(out, "{report}")?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed()).count();
        Err(Failure::runtime(format!(
            "{failed} of {} checks failed",
            report.checks.len()
        )))
    }
}
