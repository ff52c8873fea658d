//! Command-line front end: config resolution, dispatch and output.

pub mod config;
pub mod error;
pub mod execute;
pub mod payload;

use std::ffi::OsString;
use std::path::PathBuf;

use adiabatic_pointer::constants::Constants;
use clap::{Parser, Subcommand};
use toml::Value;

use config::{resolve, Command, OutputFormat, Overrides, ToleranceProfile, DEFAULTS_HELP};
use error::CliError;
use execute::{render, run_config, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "adiabatic-pointer", version, about = "Impulsive and protective measurement simulations", after_help = DEFAULTS_HELP)]
pub struct Cli {
    /// Flat TOML file of run parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub tolerance_profile: Option<ToleranceProfile>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Instantaneous coupling of a spin to a Gaussian pointer.
    ImpulsiveRun,
    /// Slow coupling to a non-degenerate H_S eigenstate.
    ProtectiveRun,
    /// Protective runs over a list of coupling times.
    #[command(name = "sweep-T")]
    SweepT,
    /// Born-rule pointer readouts with spin collapse.
    SampleReadout,
    /// Beam-parameter feasibility of a Stern-Gerlach protective measurement.
    SterngerlachFeasibility,
    /// Earth-surface observables for a spin-gravity coupling α.
    GravityObservables {
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
    /// Converts a table of experimental bounds into α.
    GravityLimits {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Physical constants in use.
    Constants,
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::ImpulsiveRun => Command::ImpulsiveRun,
            Sub::ProtectiveRun => Command::ProtectiveRun,
            Sub::SweepT => Command::SweepT,
            Sub::SampleReadout => Command::SampleReadout,
            Sub::SterngerlachFeasibility => Command::SterngerlachFeasibility,
            Sub::GravityObservables { .. } => Command::GravityObservables,
            Sub::GravityLimits { .. } => Command::GravityLimits,
            Sub::Constants => Command::Constants,
        }
    }
}

fn overrides(cli: &Cli) -> Overrides {
    let mut params = Vec::new();
    match &cli.command {
        Sub::GravityObservables { alpha: Some(a) } => params.push(("alpha".to_string(), Value::Float(*a))),
        Sub::GravityLimits { input: Some(p) } => {
            params.push(("input".to_string(), Value::String(p.display().to_string())))
        }
        _ => {}
    }
    Overrides {
        command: Some(cli.command.command()),
        seed: cli.seed,
        format: cli.format,
        out: cli.out.clone(),
        tolerance_profile: cli.tolerance_profile,
        params,
    }
}

pub fn run_cli(cli: &Cli) -> Result<(), CliError> {
    let source = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let cfg = resolve(&source, overrides(cli))?;
    let constants = Constants::from_env()?;
    let env = run_config(&cfg, &constants)?;
    let text = render(&env, cfg.format)?;
    match &cfg.out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    if cfg.format != OutputFormat::Json {
        eprintln!("wall_time: {:.3} s", env.wall_time);
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CliError::EXIT_PARSE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
