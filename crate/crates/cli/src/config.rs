//! Flat `key = value` run configuration.
//!
//! A config file may carry `command`, `seed`, `format`, `out` and
//! `tolerance_profile` next to the command's own parameters. Every key is
//! checked; anything the command does not recognise is rejected.

use std::f64::consts::FRAC_PI_6;
use std::path::PathBuf;

use adiabatic_pointer::dynamics::{Eigenbranch, ProfileKind, Splitting};
use adiabatic_pointer::quantum::{PointerGrid, PointerState};
use adiabatic_pointer::sterngerlach::{FeasibilityThresholds, SternGerlachError, SternGerlachParams};
use adiabatic_pointer::Tolerances;
use clap::ValueEnum;
use serde::Serialize;
use toml::{Table, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ImpulsiveRun,
    ProtectiveRun,
    #[value(name = "sweep-T")]
    #[serde(rename = "sweep-T")]
    SweepT,
    SampleReadout,
    SterngerlachFeasibility,
    GravityObservables,
    GravityLimits,
    Constants,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::ImpulsiveRun,
        Command::ProtectiveRun,
        Command::SweepT,
        Command::SampleReadout,
        Command::SterngerlachFeasibility,
        Command::GravityObservables,
        Command::GravityLimits,
        Command::Constants,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::ImpulsiveRun => "impulsive-run",
            Command::ProtectiveRun => "protective-run",
            Command::SweepT => "sweep-T",
            Command::SampleReadout => "sample-readout",
            Command::SterngerlachFeasibility => "sterngerlach-feasibility",
            Command::GravityObservables => "gravity-observables",
            Command::GravityLimits => "gravity-limits",
            Command::Constants => "constants",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl OutputFormat {
    fn name(&self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    Strict,
    #[default]
    Default,
}

impl ToleranceProfile {
    fn name(&self) -> &'static str {
        match self {
            ToleranceProfile::Strict => "strict",
            ToleranceProfile::Default => "default",
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        match self {
            ToleranceProfile::Strict => Tolerances::strict(),
            ToleranceProfile::Default => Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointerParams {
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    pub center: f64,
    pub width: f64,
    pub momentum: f64,
}

impl PointerParams {
    pub fn build(&self) -> Result<PointerState, CliError> {
        let grid = PointerGrid::new(self.grid_min, self.grid_max, self.grid_points)
            .map_err(|e| CliError::validation("grid_points", e.to_string()))?;
        PointerState::boosted_gaussian(grid, self.center, self.width, self.momentum)
            .map_err(|e| CliError::validation("pointer_width", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationParams {
    pub n_steps: usize,
    pub splitting: Splitting,
    /// 0 disables the cap.
    pub max_dt: f64,
    /// 0 disables the step-doubling check.
    pub convergence_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtectiveParams {
    pub system_field: [f64; 3],
    pub observable_axis: [f64; 3],
    pub apparatus: Vec<f64>,
    pub profile: String,
    pub ramp_fraction: f64,
    pub total_time: f64,
    pub branch: Eigenbranch,
    pub pointer: PointerParams,
    pub propagation: PropagationParams,
}

impl ProtectiveParams {
    pub fn profile_kind(&self) -> ProfileKind {
        if self.profile == "smooth" {
            ProfileKind::Smooth {
                ramp_fraction: self.ramp_fraction,
            }
        } else {
            ProfileKind::Square
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpulsiveParams {
    pub spin_theta: f64,
    pub spin_phi: f64,
    pub observable_axis: [f64; 3],
    pub propagated: bool,
    pub pointer: PointerParams,
    pub propagation: PropagationParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub protective: ProtectiveParams,
    pub t_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReadoutSource {
    Impulsive(ImpulsiveParams),
    Protective(ProtectiveParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutParams {
    pub source: ReadoutSource,
    pub n_samples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Impulsive(ImpulsiveParams),
    Protective(ProtectiveParams),
    Sweep(SweepParams),
    Readout(ReadoutParams),
    SternGerlach(SternGerlachParams, FeasibilityThresholds),
    GravityObservables { alpha: f64 },
    GravityLimits { input: Option<PathBuf> },
    Constants,
}

/// A fully defaulted and validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub tolerance_profile: ToleranceProfile,
    pub params: Params,
}

/// Values supplied on the command line; they win over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub tolerance_profile: Option<ToleranceProfile>,
    pub params: Vec<(String, Value)>,
}

/// Parses a config whose `command` key names the subcommand.
pub fn parse_config(source: &str) -> Result<RunConfig, CliError> {
    resolve(source, Overrides::default())
}

pub fn resolve(source: &str, overrides: Overrides) -> Result<RunConfig, CliError> {
    let table: Table = source.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(source, s.start));
        CliError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let mut keys = Keys { table };

    let file_command = keys
        .opt_string("command")?
        .map(|s| {
            Command::from_name(&s).ok_or_else(|| CliError::validation("command", format!("unknown command `{s}`")))
        })
        .transpose()?;
    let command = match (overrides.command, file_command) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::validation(
                "command",
                format!("config is for `{}` but `{}` was requested", b.name(), a.name()),
            ))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(CliError::validation("command", "missing")),
    };

    let seed = match keys.opt_int("seed")? {
        Some(s) if s < 0 => return Err(CliError::validation("seed", "must be non-negative")),
        Some(s) => s as u64,
        None => 0,
    };
    let seed = overrides.seed.unwrap_or(seed);
    if seed > i64::MAX as u64 {
        return Err(CliError::validation("seed", format!("must not exceed {}", i64::MAX)));
    }
    let format = match keys.opt_string("format")? {
        Some(s) => {
            OutputFormat::from_str(&s, false).map_err(|_| CliError::validation("format", "one of text, csv, json"))?
        }
        None => OutputFormat::default(),
    };
    let tolerance_profile = match keys.opt_string("tolerance_profile")? {
        Some(s) => ToleranceProfile::from_str(&s, false)
            .map_err(|_| CliError::validation("tolerance_profile", "one of strict, default"))?,
        None => ToleranceProfile::default(),
    };
    let out = keys.opt_string("out")?.map(PathBuf::from);

    for (k, v) in overrides.params {
        keys.table.insert(k, v);
    }

    let params = match command {
        Command::ImpulsiveRun => Params::Impulsive(impulsive(&mut keys)?),
        Command::ProtectiveRun => Params::Protective(protective(&mut keys, true)?),
        Command::SweepT => Params::Sweep(sweep(&mut keys)?),
        Command::SampleReadout => Params::Readout(readout(&mut keys)?),
        Command::SterngerlachFeasibility => {
            let (p, t) = sterngerlach(&mut keys)?;
            Params::SternGerlach(p, t)
        }
        Command::GravityObservables => {
            let alpha = keys.f64("alpha", 1.0)?;
            Params::GravityObservables { alpha }
        }
        Command::GravityLimits => {
            let input = keys.opt_string("input")?.filter(|s| !s.is_empty()).map(PathBuf::from);
            Params::GravityLimits { input }
        }
        Command::Constants => Params::Constants,
    };
    keys.finish()?;

    Ok(RunConfig {
        command,
        seed,
        format: overrides.format.unwrap_or(format),
        out: overrides.out.or(out),
        tolerance_profile: overrides.tolerance_profile.unwrap_or(tolerance_profile),
        params,
    })
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Keys {
    table: Table,
}

fn type_error(key: &str, expected: &str) -> CliError {
    CliError::validation(key, format!("must be {expected}"))
}

impl Keys {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.table.remove(key)
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Float(x)) if x.is_finite() => Ok(Some(x)),
            Some(Value::Integer(i)) => Ok(Some(i as f64)),
            Some(_) => Err(type_error(key, "a finite number")),
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    fn opt_int(&mut self, key: &str) -> Result<Option<i64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(i)),
            Some(_) => Err(type_error(key, "an integer")),
        }
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.opt_int(key)? {
            None => Ok(default),
            Some(i) if i >= 0 => Ok(i as usize),
            Some(_) => Err(type_error(key, "a non-negative integer")),
        }
    }

    fn bool(&mut self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(b),
            Some(_) => Err(type_error(key, "true or false")),
        }
    }

    fn opt_string(&mut self, key: &str) -> Result<Option<String>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(type_error(key, "a string")),
        }
    }

    fn choice(&mut self, key: &str, options: &[&str], default: &str) -> Result<String, CliError> {
        let s = self.opt_string(key)?.unwrap_or_else(|| default.to_string());
        if options.contains(&s.as_str()) {
            Ok(s)
        } else {
            Err(CliError::validation(key, format!("one of {}", options.join(", "))))
        }
    }

    fn vec(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.take(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(items)) => items
                .into_iter()
                .map(|v| match v {
                    Value::Float(x) if x.is_finite() => Ok(x),
                    Value::Integer(i) => Ok(i as f64),
                    _ => Err(type_error(key, "an array of finite numbers")),
                })
                .collect(),
            Some(_) => Err(type_error(key, "an array of numbers")),
        }
    }

    fn vec3(&mut self, key: &str, default: [f64; 3]) -> Result<[f64; 3], CliError> {
        let v = self.vec(key, &default)?;
        <[f64; 3]>::try_from(v).map_err(|_| type_error(key, "an array of three numbers"))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.table.keys().next() {
            Some(k) => Err(CliError::validation(k.clone(), "unknown key")),
            None => Ok(()),
        }
    }
}

fn ensure(ok: bool, key: &str, constraint: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::validation(key, constraint))
    }
}

fn nonzero3(v: [f64; 3]) -> bool {
    v.iter().any(|x| *x != 0.0)
}

const SIXTY_DEGREES: [f64; 3] = [0.866_025_403_784_438_6, 0.0, 0.5];

fn pointer(keys: &mut Keys) -> Result<PointerParams, CliError> {
    let p = PointerParams {
        grid_points: keys.usize("grid_points", 1024)?,
        grid_min: keys.f64("grid_min", -4.0)?,
        grid_max: keys.f64("grid_max", 4.0)?,
        center: keys.f64("pointer_center", 0.0)?,
        width: keys.f64("pointer_width", 0.05)?,
        momentum: keys.f64("pointer_momentum", 0.0)?,
    };
    ensure(
        p.grid_points >= 16 && p.grid_points.is_power_of_two() && p.grid_points <= 1 << 20,
        "grid_points",
        "a power of two between 16 and 1048576",
    )?;
    ensure(p.grid_min < p.grid_max, "grid_max", "must exceed grid_min")?;
    ensure(p.width > 0.0, "pointer_width", "must be positive")?;
    p.build()?;
    Ok(p)
}

fn propagation(keys: &mut Keys) -> Result<PropagationParams, CliError> {
    let n_steps = keys.usize("n_steps", 1000)?;
    ensure(
        (10..=100_000_000).contains(&n_steps),
        "n_steps",
        "between 10 and 100000000",
    )?;
    let splitting = match keys.choice("splitting", &["strang", "first_order"], "strang")?.as_str() {
        "first_order" => Splitting::FirstOrder,
        _ => Splitting::Strang,
    };
    let max_dt = keys.f64("max_dt", 0.1)?;
    ensure(max_dt >= 0.0, "max_dt", "must be non-negative (0 disables)")?;
    let convergence_tol = keys.f64("convergence_tol", 0.0)?;
    ensure(
        convergence_tol >= 0.0,
        "convergence_tol",
        "must be non-negative (0 disables)",
    )?;
    Ok(PropagationParams {
        n_steps,
        splitting,
        max_dt,
        convergence_tol,
    })
}

fn protective(keys: &mut Keys, with_time: bool) -> Result<ProtectiveParams, CliError> {
    let system_field = keys.vec3("system_field", [0.0, 0.0, -1.0])?;
    ensure(nonzero3(system_field), "system_field", "must have a nonzero Pauli part")?;
    let observable_axis = keys.vec3("observable_axis", SIXTY_DEGREES)?;
    ensure(nonzero3(observable_axis), "observable_axis", "must be nonzero")?;
    let apparatus = keys.vec("apparatus", &[])?;
    let profile = keys.choice("profile", &["square", "smooth"], "square")?;
    let ramp_fraction = keys.f64("ramp_fraction", 0.1)?;
    ensure(
        ramp_fraction > 0.0 && ramp_fraction <= 0.25,
        "ramp_fraction",
        "must lie in (0, 0.25]",
    )?;
    let total_time = if with_time { keys.f64("total_time", 500.0)? } else { 1.0 };
    ensure(total_time > 0.0, "total_time", "must be positive")?;
    let branch = match keys.choice("branch", &["ground", "excited"], "ground")?.as_str() {
        "excited" => Eigenbranch::Excited,
        _ => Eigenbranch::Ground,
    };
    Ok(ProtectiveParams {
        system_field,
        observable_axis,
        apparatus,
        profile,
        ramp_fraction,
        total_time,
        branch,
        pointer: pointer(keys)?,
        propagation: propagation(keys)?,
    })
}

fn impulsive(keys: &mut Keys) -> Result<ImpulsiveParams, CliError> {
    let spin_theta = keys.f64("spin_theta", 2.0 * FRAC_PI_6)?;
    ensure(
        (0.0..=std::f64::consts::PI).contains(&spin_theta),
        "spin_theta",
        "must lie in [0, π]",
    )?;
    let spin_phi = keys.f64("spin_phi", 0.0)?;
    let observable_axis = keys.vec3("observable_axis", [0.0, 0.0, 1.0])?;
    ensure(nonzero3(observable_axis), "observable_axis", "must be nonzero")?;
    Ok(ImpulsiveParams {
        spin_theta,
        spin_phi,
        observable_axis,
        propagated: keys.bool("propagated", false)?,
        pointer: pointer(keys)?,
        propagation: propagation(keys)?,
    })
}

fn sweep(keys: &mut Keys) -> Result<SweepParams, CliError> {
    let t_values = keys.vec("t_values", &[50.0, 100.0, 200.0, 400.0, 800.0])?;
    ensure(t_values.len() >= 3, "t_values", "needs at least 3 entries")?;
    ensure(
        t_values.iter().all(|t| *t > 0.0),
        "t_values",
        "entries must be positive",
    )?;
    ensure(
        t_values.windows(2).all(|w| w[0] < w[1]),
        "t_values",
        "must be strictly ascending",
    )?;
    Ok(SweepParams {
        protective: protective(keys, false)?,
        t_values,
    })
}

fn readout(keys: &mut Keys) -> Result<ReadoutParams, CliError> {
    let n_samples = keys.usize("n_samples", 1000)? as u64;
    ensure(
        (1..=10_000_000).contains(&n_samples),
        "n_samples",
        "between 1 and 10000000",
    )?;
    let source = match keys
        .choice("source", &["impulsive", "protective"], "impulsive")?
        .as_str()
    {
        "protective" => ReadoutSource::Protective(protective(keys, true)?),
        _ => ReadoutSource::Impulsive(impulsive(keys)?),
    };
    Ok(ReadoutParams { source, n_samples })
}

fn sterngerlach(keys: &mut Keys) -> Result<(SternGerlachParams, FeasibilityThresholds), CliError> {
    let d = SternGerlachParams::default();
    let p = SternGerlachParams {
        moment: keys.f64("moment", d.moment)?,
        b0: keys.f64("b0", d.b0)?,
        static_axis: keys.vec3("static_axis", d.static_axis)?,
        b_tilde: keys.f64("b_tilde", d.b_tilde)?,
        gradient_axis: keys.vec3("gradient_axis", d.gradient_axis)?,
        length: keys.f64("length", d.length)?,
        velocity: keys.f64("velocity", d.velocity)?,
        width: keys.f64("width", d.width)?,
        mass: keys.f64("mass", d.mass)?,
        x_max: keys.f64("x_max", d.x_max)?,
        drift_time: keys.f64("drift_time", d.drift_time)?,
    };
    p.validate().map_err(|e| match e {
        SternGerlachError::InvalidParameter { name, constraint, .. } => {
            CliError::validation(name, format!("must be {constraint}"))
        }
        SternGerlachError::NotUnit { name, .. } => CliError::validation(name, "must be a unit vector"),
        other => CliError::validation("sterngerlach", other.to_string()),
    })?;
    let dt = FeasibilityThresholds::default();
    let t = FeasibilityThresholds {
        max_weakness: keys.f64("max_weakness", dt.max_weakness)?,
        min_momentum_ratio: keys.f64("min_momentum_ratio", dt.min_momentum_ratio)?,
    };
    ensure(t.max_weakness > 0.0, "max_weakness", "must be positive")?;
    ensure(t.min_momentum_ratio > 0.0, "min_momentum_ratio", "must be positive")?;
    Ok((p, t))
}

fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| Value::Float(*x)).collect())
}

fn write_pointer(t: &mut Table, p: &PointerParams) {
    t.insert("grid_points".into(), Value::Integer(p.grid_points as i64));
    t.insert("grid_min".into(), Value::Float(p.grid_min));
    t.insert("grid_max".into(), Value::Float(p.grid_max));
    t.insert("pointer_center".into(), Value::Float(p.center));
    t.insert("pointer_width".into(), Value::Float(p.width));
    t.insert("pointer_momentum".into(), Value::Float(p.momentum));
}

fn write_propagation(t: &mut Table, p: &PropagationParams) {
    t.insert("n_steps".into(), Value::Integer(p.n_steps as i64));
    let s = match p.splitting {
        Splitting::Strang => "strang",
        Splitting::FirstOrder => "first_order",
    };
    t.insert("splitting".into(), Value::String(s.into()));
    t.insert("max_dt".into(), Value::Float(p.max_dt));
    t.insert("convergence_tol".into(), Value::Float(p.convergence_tol));
}

fn write_protective(t: &mut Table, p: &ProtectiveParams, with_time: bool) {
    t.insert("system_field".into(), floats(&p.system_field));
    t.insert("observable_axis".into(), floats(&p.observable_axis));
    t.insert("apparatus".into(), floats(&p.apparatus));
    t.insert("profile".into(), Value::String(p.profile.clone()));
    t.insert("ramp_fraction".into(), Value::Float(p.ramp_fraction));
    if with_time {
        t.insert("total_time".into(), Value::Float(p.total_time));
    }
    let b = match p.branch {
        Eigenbranch::Ground => "ground",
        Eigenbranch::Excited => "excited",
    };
    t.insert("branch".into(), Value::String(b.into()));
    write_pointer(t, &p.pointer);
    write_propagation(t, &p.propagation);
}

fn write_impulsive(t: &mut Table, p: &ImpulsiveParams) {
    t.insert("spin_theta".into(), Value::Float(p.spin_theta));
    t.insert("spin_phi".into(), Value::Float(p.spin_phi));
    t.insert("observable_axis".into(), floats(&p.observable_axis));
    t.insert("propagated".into(), Value::Boolean(p.propagated));
    write_pointer(t, &p.pointer);
    write_propagation(t, &p.propagation);
}

impl RunConfig {
    /// Every setting, defaults included, as config text that parses back to
    /// this config.
    pub fn resolved_toml(&self) -> String {
        let mut t = Table::new();
        t.insert("command".into(), Value::String(self.command.name().into()));
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t.insert("format".into(), Value::String(self.format.name().into()));
        t.insert(
            "tolerance_profile".into(),
            Value::String(self.tolerance_profile.name().into()),
        );
        if let Some(out) = &self.out {
            t.insert("out".into(), Value::String(out.display().to_string()));
        }
        match &self.params {
            Params::Impulsive(p) => write_impulsive(&mut t, p),
            Params::Protective(p) => write_protective(&mut t, p, true),
            Params::Sweep(s) => {
                t.insert("t_values".into(), floats(&s.t_values));
                write_protective(&mut t, &s.protective, false);
            }
            Params::Readout(r) => {
                t.insert("n_samples".into(), Value::Integer(r.n_samples as i64));
                match &r.source {
                    ReadoutSource::Impulsive(p) => {
                        t.insert("source".into(), Value::String("impulsive".into()));
                        write_impulsive(&mut t, p);
                    }
                    ReadoutSource::Protective(p) => {
                        t.insert("source".into(), Value::String("protective".into()));
                        write_protective(&mut t, p, true);
                    }
                }
            }
            Params::SternGerlach(p, th) => {
                t.insert("moment".into(), Value::Float(p.moment));
                t.insert("b0".into(), Value::Float(p.b0));
                t.insert("static_axis".into(), floats(&p.static_axis));
                t.insert("b_tilde".into(), Value::Float(p.b_tilde));
                t.insert("gradient_axis".into(), floats(&p.gradient_axis));
                t.insert("length".into(), Value::Float(p.length));
                t.insert("velocity".into(), Value::Float(p.velocity));
                t.insert("width".into(), Value::Float(p.width));
                t.insert("mass".into(), Value::Float(p.mass));
                t.insert("x_max".into(), Value::Float(p.x_max));
                t.insert("drift_time".into(), Value::Float(p.drift_time));
                t.insert("max_weakness".into(), Value::Float(th.max_weakness));
                t.insert("min_momentum_ratio".into(), Value::Float(th.min_momentum_ratio));
            }
            Params::GravityObservables { alpha } => {
                t.insert("alpha".into(), Value::Float(*alpha));
            }
            Params::GravityLimits { input } => {
                if let Some(p) = input {
                    t.insert("input".into(), Value::String(p.display().to_string()));
                }
            }
            Params::Constants => {}
        }
        toml::to_string(&t).expect("config table serializes")
    }
}

/// Key reference printed by `--help`.
pub const DEFAULTS_HELP: &str = "\
Config keys (flat `key = value`; unknown keys are rejected):
  common        command, seed = 0, format = \"text\", out, tolerance_profile = \"default\"
  pointer       grid_points = 1024, grid_min = -4.0, grid_max = 4.0,
                pointer_center = 0.0, pointer_width = 0.05, pointer_momentum = 0.0
  propagation   n_steps = 1000, splitting = \"strang\" | \"first_order\",
                max_dt = 0.1 (0 disables), convergence_tol = 0.0 (0 disables)
  impulsive-run spin_theta = π/3, spin_phi = 0.0, observable_axis = [0, 0, 1],
                propagated = false, plus pointer and propagation keys
  protective-run
                system_field = [0, 0, -1] (H_S = h·σ), observable_axis = [sin 60°, 0, cos 60°],
                apparatus = [] (H_A polynomial in Q_A), profile = \"square\" | \"smooth\",
                ramp_fraction = 0.1, total_time = 500.0, branch = \"ground\" | \"excited\",
                plus pointer and propagation keys
  sweep-T       t_values = [50, 100, 200, 400, 800], plus protective-run keys except total_time
  sample-readout
                source = \"impulsive\" | \"protective\", n_samples = 1000, plus the source's keys;
                sample i uses seed + i
  sterngerlach-feasibility
                moment = 1 (μ_N), b0 = 1 (G), static_axis = [0, 0, 1], b_tilde = 1e11,
                gradient_axis = [0, 0, 1], length = 30 (cm), velocity = 1 (cm/s),
                width = 0.1 (cm), mass = 50 (amu), x_max = 1 (cm), drift_time = 30 (s),
                max_weakness = 0.2, min_momentum_ratio = 100
  gravity-observables
                alpha = 1.0
  gravity-limits
                input = path to a limits CSV (bundled table when absent)";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_protective_config_gets_defaults() {
        let c = parse_config("command = \"protective-run\"").unwrap();
        let Params::Protective(p) = &c.params else { panic!() };
        assert_eq!(p.pointer.grid_points, 1024);
        assert_eq!(p.propagation.splitting, Splitting::Strang);
        assert_eq!(c.format, OutputFormat::Text);
    }

    #[test]
    fn negative_time_names_key() {
        let e = parse_config("command = \"protective-run\"\ntotal_time = -5").unwrap_err();
        assert!(
            matches!(&e, CliError::Validation { key, .. } if key == "total_time"),
            "{e}"
        );
    }

    #[test]
    fn unknown_key_rejected() {
        let e = parse_config("command = \"constants\"\ncolour = \"red\"").unwrap_err();
        assert!(matches!(&e, CliError::Validation { key, .. } if key == "colour"), "{e}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_config("command = \"constants\"\nseed = = 3\n").unwrap_err();
        match e {
            CliError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn resolved_config_round_trips() {
        for src in [
            "command = \"impulsive-run\"\nspin_theta = 1.0\npropagated = true",
            "command = \"protective-run\"\nprofile = \"smooth\"\napparatus = [0.0, 0.1]\nbranch = \"excited\"",
            "command = \"sweep-T\"\nt_values = [10, 20, 40]\npointer_momentum = 3.0",
            "command = \"sample-readout\"\nsource = \"protective\"\ntotal_time = 50\nseed = 9",
            "command = \"sterngerlach-feasibility\"\nvelocity = 2.0\nformat = \"json\"",
            "command = \"gravity-observables\"\nalpha = 70",
            "command = \"gravity-limits\"\ninput = \"x.csv\"\nout = \"o.csv\"",
            "command = \"constants\"\ntolerance_profile = \"strict\"",
        ] {
            let c = parse_config(src).unwrap();
            let again = parse_config(&c.resolved_toml()).unwrap();
            assert_eq!(c, again, "{src}");
        }
    }

    #[test]
    fn command_mismatch_rejected() {
        let o = Overrides {
            command: Some(Command::Constants),
            ..Default::default()
        };
        assert!(resolve("command = \"sweep-T\"", o).is_err());
    }

    #[test]
    fn range_checks() {
        for (src, key) in [
            ("command = \"protective-run\"\ngrid_points = 1000", "grid_points"),
            ("command = \"protective-run\"\nn_steps = 5", "n_steps"),
            ("command = \"protective-run\"\nramp_fraction = 0.5", "ramp_fraction"),
            ("command = \"protective-run\"\npointer_width = 3.0", "pointer_width"),
            ("command = \"sweep-T\"\nt_values = [1, 2]", "t_values"),
            ("command = \"sweep-T\"\nt_values = [1, 3, 2]", "t_values"),
            ("command = \"impulsive-run\"\nspin_theta = 4.0", "spin_theta"),
            ("command = \"sterngerlach-feasibility\"\nvelocity = 0", "velocity"),
            (
                "command = \"sterngerlach-feasibility\"\nstatic_axis = [1, 1, 0]",
                "static_axis",
            ),
            ("command = \"constants\"\nformat = \"xml\"", "format"),
            ("command = \"constants\"\nseed = -1", "seed"),
            ("command = \"bogus\"", "command"),
        ] {
            let e = parse_config(src).unwrap_err();
            assert!(
                matches!(&e, CliError::Validation { key: k, .. } if k == key),
                "{src}: {e}"
            );
        }
    }
}
