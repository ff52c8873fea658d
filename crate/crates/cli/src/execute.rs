//! Runs a resolved config against the core library.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use adiabatic_pointer::constants::Constants;
use adiabatic_pointer::dynamics::{CouplingProfile, HamiltonianSpec, PropagatorConfig};
use adiabatic_pointer::gravity::{
    differential_acceleration, energy_splitting, evaluate_limits, hg_gravity_signal, limits_table, load_limits,
    precession_rate, G_FACTOR_199, G_FACTOR_201,
};
use adiabatic_pointer::protocols::{
    exact_failure_probability, run_impulsive, run_impulsive_propagated, run_protective, sweep_t, ReadoutSampler,
    RunResult,
};
use adiabatic_pointer::quantum::{SpinOperator, SpinState};
use adiabatic_pointer::sterngerlach::feasibility_report;
use adiabatic_pointer::Tolerances;
use serde::Serialize;

use crate::config::{
    ImpulsiveParams, OutputFormat, Params, PropagationParams, ProtectiveParams, ReadoutSource, RunConfig,
};
use crate::error::CliError;
use crate::payload::{render_csv, render_text, Cell, Table};

#[derive(Debug, Clone, Serialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub resolved_config: String,
    pub constants_version: String,
    pub payload: Vec<Table>,
    /// Seconds.
    pub wall_time: f64,
}

pub fn run_config(cfg: &RunConfig, c: &Constants) -> Result<ResultEnvelope, CliError> {
    let start = Instant::now();
    let payload = execute(cfg, c)?;
    Ok(ResultEnvelope {
        command: cfg.command.name().to_string(),
        resolved_config: cfg.resolved_toml(),
        constants_version: c.version.clone(),
        payload,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

pub fn render(env: &ResultEnvelope, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Text => Ok(render_text(&env.payload)),
        OutputFormat::Csv => render_csv(&env.payload),
        OutputFormat::Json => serde_json::to_string_pretty(env)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn propagator(p: &PropagationParams, tol: &Tolerances) -> PropagatorConfig {
    PropagatorConfig {
        n_steps: p.n_steps,
        splitting: p.splitting,
        max_dt: (p.max_dt > 0.0).then_some(p.max_dt),
        convergence_tol: (p.convergence_tol > 0.0).then_some(p.convergence_tol),
        norm_tol: tol.composite_norm,
    }
}

pub fn protective_spec(p: &ProtectiveParams) -> Result<HamiltonianSpec, CliError> {
    let system = SpinOperator::from_pauli(0.0, p.system_field, "H_S");
    let observable = SpinOperator::sigma_dot(p.observable_axis)?;
    let profile = CouplingProfile::new(p.profile_kind(), p.total_time)?;
    Ok(HamiltonianSpec::new(system, observable, profile).with_apparatus(p.apparatus.clone()))
}

fn impulsive(p: &ImpulsiveParams, tol: &Tolerances) -> Result<RunResult, CliError> {
    let nu = SpinState::from_angles(p.spin_theta, p.spin_phi);
    let q_s = SpinOperator::sigma_dot(p.observable_axis)?;
    let pointer = p.pointer.build()?;
    let run = if p.propagated {
        run_impulsive_propagated(&nu, &q_s, &pointer, &propagator(&p.propagation, tol))?
    } else {
        run_impulsive(&nu, &q_s, &pointer)?
    };
    Ok(run)
}

fn protective(p: &ProtectiveParams, tol: &Tolerances) -> Result<RunResult, CliError> {
    let spec = protective_spec(p)?;
    let pointer = p.pointer.build()?;
    Ok(run_protective(
        &spec,
        &pointer,
        p.branch,
        &propagator(&p.propagation, tol),
        tol,
    )?)
}

fn run_tables(run: &RunResult, steps: Option<usize>) -> Vec<Table> {
    let mut fields = vec![
        ("initial_center", run.initial_center.into()),
        ("shift", run.shift.into()),
        ("expected_shift", run.expected_shift.into()),
        ("shift_error", run.shift_error().into()),
        ("system_fidelity", run.system_fidelity.into()),
        ("infidelity", run.infidelity().into()),
        ("linear_entropy", run.linear_entropy.into()),
        ("minor_schmidt_weight", run.minor_schmidt_weight().into()),
        ("ensemble_purity", run.ensemble_rho.purity().into()),
        ("final_norm", run.final_state.norm_sqr().into()),
    ];
    if let Some(n) = steps {
        fields.push(("steps", n.into()));
    }
    let mut branches = Table::new("branches", &["center", "weight"]);
    for (center, weight) in &run.branch_weights {
        branches.push(vec![(*center).into(), (*weight).into()]);
    }
    vec![Table::record("summary", fields), branches]
}

fn readout_tables(run: &RunResult, seed: u64, n: u64) -> Result<Vec<Table>, CliError> {
    let sampler = ReadoutSampler::new(run)?;
    let nu = run.initial_spin;
    let mut samples = Table::new("readouts", &["sample", "seed", "r", "cell", "fidelity", "failed"]);
    for i in 0..n {
        let s = seed.wrapping_add(i);
        let r = sampler.draw(s);
        let f = r.collapsed_spin.overlap(&nu);
        samples.push(vec![
            i.into(),
            s.into(),
            r.r.into(),
            r.cell.into(),
            f.into(),
            (f < 0.5).into(),
        ]);
    }
    let summary = Table::record(
        "summary",
        vec![
            ("n_samples", n.into()),
            ("first_seed", seed.into()),
            ("failure_fraction", sampler.failure_fraction(seed, n).into()),
            ("exact_failure_probability", exact_failure_probability(run).into()),
        ],
    );
    Ok(vec![summary, samples])
}

pub fn execute(cfg: &RunConfig, c: &Constants) -> Result<Vec<Table>, CliError> {
    let tol = cfg.tolerance_profile.tolerances();
    match &cfg.params {
        Params::Impulsive(p) => {
            let steps = p.propagated.then(|| propagator(&p.propagation, &tol).steps_for(1.0));
            Ok(run_tables(&impulsive(p, &tol)?, steps))
        }
        Params::Protective(p) => {
            let steps = propagator(&p.propagation, &tol).steps_for(p.total_time);
            Ok(run_tables(&protective(p, &tol)?, Some(steps)))
        }
        Params::Sweep(s) => {
            let spec = protective_spec(&s.protective)?;
            let pointer = s.protective.pointer.build()?;
            let records = sweep_t(
                &spec,
                &pointer,
                s.protective.branch,
                &s.t_values,
                &propagator(&s.protective.propagation, &tol),
                &tol,
            )?;
            let mut t = Table::new("sweep", &["T", "shift_error", "infidelity", "linear_entropy"]);
            for r in records {
                t.push(vec![
                    r.total_time.into(),
                    r.shift_error.into(),
                    r.infidelity.into(),
                    r.linear_entropy.into(),
                ]);
            }
            Ok(vec![t])
        }
        Params::Readout(r) => {
            let run = match &r.source {
                ReadoutSource::Impulsive(p) => impulsive(p, &tol)?,
                ReadoutSource::Protective(p) => protective(p, &tol)?,
            };
            readout_tables(&run, cfg.seed, r.n_samples)
        }
        Params::SternGerlach(p, th) => {
            let f = feasibility_report(p, th, c)?;
            Ok(vec![Table::record(
                "feasibility",
                vec![
                    ("critical_velocity", f.critical_velocity.into()),
                    ("lab_gradient", f.lab_gradient.into()),
                    ("lab_gradient_rounded", f.lab_gradient_rounded.into()),
                    ("weakness_ratio", f.weakness_ratio.into()),
                    ("p_meas", f.p_meas.into()),
                    ("width_momentum", f.width_momentum.into()),
                    ("momentum_ratio", f.momentum_ratio.into()),
                    ("kick_velocity", f.kick_velocity.into()),
                    ("displacement", f.displacement.into()),
                    ("width_at_zero", f.width_at_zero.into()),
                    ("width_after_drift", f.width_after_drift.into()),
                    ("weak_field", f.weak_field.into()),
                    ("momentum_dominates", f.momentum_dominates.into()),
                    ("resolvable", f.resolvable.into()),
                    ("feasible", f.feasible.into()),
                ],
            )])
        }
        Params::GravityObservables { alpha } => {
            let (omega, nu) = precession_rate(*alpha, c);
            let mut t = Table::new("observables", &["quantity", "value", "units"]);
            let rows: [(&str, f64, &str); 8] = [
                ("alpha", *alpha, "1"),
                ("precession_angular", omega, "rad/s"),
                ("precession_frequency", nu, "Hz"),
                ("energy_splitting", energy_splitting(*alpha, c), "eV"),
                (
                    "differential_acceleration_electron",
                    differential_acceleration(*alpha, c.si.electron_mass, c),
                    "1",
                ),
                (
                    "differential_acceleration_neutron",
                    differential_acceleration(*alpha, c.si.neutron_mass, c),
                    "1",
                ),
                (
                    "hg_signal",
                    hg_gravity_signal(*alpha, 0.0, G_FACTOR_199, G_FACTOR_201, c),
                    "Hz",
                ),
                ("earth_rotation", c.earth_rotation_hz(), "Hz"),
            ];
            for (q, v, u) in rows {
                t.push(vec![q.into(), v.into(), u.into()]);
            }
            Ok(vec![t])
        }
        Params::GravityLimits { input } => {
            let limits = match input {
                Some(path) => {
                    let src =
                        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    load_limits(&src)?
                }
                None => limits_table()?,
            };
            let mut t = Table::new(
                "limits",
                &[
                    "name",
                    "kind",
                    "value",
                    "units",
                    "sensitivity_k",
                    "alpha",
                    "quoted_alpha_bound",
                    "ratio",
                    "within_factor_three",
                ],
            );
            for e in evaluate_limits(&limits, c)? {
                t.push(vec![
                    e.name.into(),
                    e.kind.as_str().into(),
                    e.value.into(),
                    e.units.into(),
                    e.sensitivity_k.into(),
                    e.alpha.into(),
                    e.quoted_alpha_bound.into(),
                    e.ratio.into(),
                    e.within_factor_three.into(),
                ]);
            }
            Ok(vec![t])
        }
        Params::Constants => {
            let s = &c.si;
            let rows: [(&str, f64, &str); 17] = [
                ("speed_of_light", s.speed_of_light, "m/s"),
                ("planck", s.planck, "J s"),
                ("reduced_planck", s.reduced_planck, "J s"),
                ("elementary_charge", s.elementary_charge, "C"),
                ("gravitational_constant", s.gravitational_constant, "m^3/(kg s^2)"),
                ("nuclear_magneton", s.nuclear_magneton, "J/T"),
                ("electron_mass", s.electron_mass, "kg"),
                ("neutron_mass", s.neutron_mass, "kg"),
                ("atomic_mass_unit", s.atomic_mass_unit, "kg"),
                ("bohr_radius", s.bohr_radius, "m"),
                ("earth_gm", c.earth.gm, "m^3/s^2"),
                ("earth_mean_radius", c.earth.mean_radius, "m"),
                ("earth_sidereal_day", c.earth.sidereal_day, "s"),
                ("earth_gravity", c.earth_gravity(), "m/s^2"),
                ("earth_rotation", c.earth_rotation_hz(), "Hz"),
                ("sun_radius", c.sun.radius, "m"),
                ("hg_g_ratio", G_FACTOR_199 / G_FACTOR_201, "1"),
            ];
            let mut t = Table::new("constants", &["name", "value", "units"]);
            t.push(vec!["version".into(), Cell::Text(c.version.clone()), "".into()]);
            for (n, v, u) in rows {
                t.push(vec![n.into(), v.into(), u.into()]);
            }
            Ok(vec![t])
        }
    }
}
