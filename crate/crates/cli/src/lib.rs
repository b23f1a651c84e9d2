//! Command-line front end for `coulomb3`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code: 0 on success, 1 for invalid input, 2 for an unstable system and 3
//! when no solution exists.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use coulomb3::geometry;
use coulomb3::kappa0::{self, Kappa0Error, SpectrumOptions};
use coulomb3::kappa1::{self, Kappa1Error, Kappa1Numbers, MatchOptions};
use coulomb3::{System, SystemError};

pub mod catalog;
pub mod report;

pub use catalog::{catalog, lookup, CatalogEntry, SystemConfig};
pub use report::{Format, Report, Units};

use report::{CalibrationReport, MatchReport, MatchRow, ScanReport, SpectrumReport, StabilityReport, SystemSummary, WitnessRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown system `{key}`; available: {available}")]
    UnknownSystem { key: String, available: String },
    #[error("bad system file: {0}")]
    Config(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("system is unstable: no arrangement admits a feasible triangle")]
    Unstable,
    #[error("{0}")]
    NoSolution(String),
    #[error(transparent)]
    Kappa0(Kappa0Error),
    #[error(transparent)]
    Kappa1(Kappa1Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<Kappa0Error> for CliError {
    fn from(e: Kappa0Error) -> Self {
        match e {
            Kappa0Error::Unstable => CliError::Unstable,
            other => CliError::Kappa0(other),
        }
    }
}

impl From<Kappa1Error> for CliError {
    fn from(e: Kappa1Error) -> Self {
        match e {
            Kappa1Error::Kappa0(inner) => inner.into(),
            Kappa1Error::NoMatch => CliError::NoSolution(e.to_string()),
            other => CliError::Kappa1(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unstable => 2,
            CliError::NoSolution(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "coulomb3", version, about = "Bound-state energies of three-body Coulomb systems")]
pub struct Cli {
    #[command(flatten)]
    pub system: SystemArgs,

    /// Energy units of the output.
    #[arg(long, value_enum, global = true)]
    pub units: Option<Units>,

    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Built-in system: helium, ps-minus, e+hydrogen.
    #[arg(long, global = true, conflicts_with_all = ["charges", "config"])]
    pub system: Option<String>,

    /// Integer charges, e.g. -1,-1,2.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, requires = "masses")]
    pub charges: Option<Vec<i32>>,

    /// Masses in electron masses, e.g. 1,1,7294.3.
    #[arg(long, global = true, value_delimiter = ',', requires = "charges")]
    pub masses: Option<Vec<f64>>,

    /// JSON file with label, charges and masses.
    #[arg(long, global = true, conflicts_with = "charges")]
    pub config: Option<PathBuf>,

    /// Label for a system given by --charges/--masses.
    #[arg(long, global = true)]
    pub label: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search particle orderings for a feasible triangle.
    Stability,
    /// Discrete spectrum for κ = 0 or κ = 1.
    Spectrum {
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=1))]
        kappa: u32,
        /// Largest principal number (default 5 for κ = 0, 1 for κ = 1).
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
        kmax: u32,
        /// Include every distinct particle ordering.
        #[arg(long)]
        arrangements: bool,
        /// Multiplier samples per exponent (κ = 1).
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// Cut-off radius in bohr for κ = 1 energies.
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Both sides of the κ = 1 matching condition over a multiplier grid.
    Scan {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1))]
        kappa: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        k: u32,
        #[arg(long)]
        wp_min: f64,
        #[arg(long)]
        wp_max: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n1: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n2: u32,
    },
    /// Cut-off radius that reproduces a reference total energy (Hartree).
    CalibrateR0 {
        #[arg(long, allow_hyphen_values = true)]
        reference: f64,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_system(args: &SystemArgs) -> Result<(System, Option<Units>), CliError> {
    if let Some(key) = &args.system {
        return Ok((catalog::lookup(key)?.system, None));
    }
    if let Some(path) = &args.config {
        let cfg = SystemConfig::load(path)?;
        return Ok((cfg.to_system()?, cfg.units));
    }
    match (&args.charges, &args.masses) {
        (Some(c), Some(m)) => {
            let charges: [i32; 3] = c
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage(format!("--charges needs 3 values, got {}", c.len())))?;
            let masses: [f64; 3] = m
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage(format!("--masses needs 3 values, got {}", m.len())))?;
            let label = args.label.clone().unwrap_or_else(|| "custom".to_owned());
            Ok((System::new(charges, masses)?.with_label(label), None))
        }
        _ => Err(CliError::Usage("select a system with --system, --config or --charges/--masses".into())),
    }
}

/// Builds the report for the parsed command, in Hartree.
pub fn build_report(command: &Command, system: &System) -> Result<Report, CliError> {
    match *command {
        Command::Stability => {
            let stability = geometry::stable(system);
            Ok(Report::Stability(StabilityReport {
                system: SystemSummary::of(system),
                stable: stability.is_stable(),
                witness: stability.witness.as_ref().map(WitnessRow::of),
            }))
        }
        Command::Spectrum { kappa: 0, nmax, kmax, arrangements, .. } => {
            let opts = SpectrumOptions { n_max: nmax.unwrap_or(5), k_max: kmax, scan_arrangements: arrangements };
            let spectrum = kappa0::spectrum_kappa0(system, &opts)?;
            Ok(Report::Spectrum(SpectrumReport::new(system, &spectrum)))
        }
        Command::Spectrum { nmax, kmax, arrangements, steps, r0, .. } => {
            if !geometry::stable(system).is_stable() {
                return Err(CliError::Unstable);
            }
            if let Some(r) = r0 {
                if r.is_nan() || r <= 0.0 {
                    return Err(CliError::Usage(format!("--r0 must be positive, got {r}")));
                }
            }
            let opts = MatchOptions {
                n_max: nmax.unwrap_or(1),
                k_max: kmax,
                steps,
                l: 0,
                scan_arrangements: arrangements,
            };
            let codes: Vec<String> = system.arrangements().iter().map(|(a, _)| a.code()).collect();
            let matches = kappa1::find_matches(system, &opts, r0);
            let row = |m: &coulomb3::Kappa1Match| MatchRow::of(m, codes[m.arrangement].clone());
            Ok(Report::Matches(MatchReport {
                system: SystemSummary::of(system),
                units: Units::Hartree,
                matches: matches.iter().map(row).collect(),
                infimum: kappa1::infimum_match(&matches).map(row),
            }))
        }
        Command::Scan { k, wp_min, wp_max, steps, n1, n2, .. } => {
            let qn = Kappa1Numbers { n1, n2, l1: 0, l2: 0 };
            let curve = kappa1::scan_matching(system, qn, k, (wp_min, wp_max), steps)?;
            Ok(Report::Scan(ScanReport::new(system, &curve)))
        }
        Command::CalibrateR0 { reference } => {
            let cal = kappa1::calibrate_r0(system, reference)?;
            let e1 = cal.matched.energy().expect("calibrated match has r0");
            Ok(Report::Calibration(CalibrationReport {
                system: SystemSummary::of(system),
                units: Units::Hartree,
                reference,
                e0: cal.e0,
                e1,
                total: kappa1::total_energy(&[
                    kappa1::KappaEnergy { kappa: 0, energy: cal.e0 },
                    kappa1::KappaEnergy { kappa: 1, energy: e1 },
                ])?,
                r0: cal.r0,
                matched: MatchRow::of(&cal.matched, system.arrangements()[0].0.code()),
            }))
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (system, config_units) = resolve_system(&cli.system)?;
    let units = cli.units.or(config_units).unwrap_or(Units::Hartree);
    let report = build_report(&cli.command, &system)?.in_units(units);

    let code = match &report {
        Report::Stability(r) if !r.stable => 2,
        Report::Spectrum(r) if r.entries.is_empty() => 3,
        _ => 0,
    };
    match &cli.output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            report.write(cli.format, &mut file)?;
            file.flush()?;
        }
        None => report.write(cli.format, stdout)?,
    }
    Ok(code)
}
