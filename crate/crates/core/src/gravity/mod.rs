//! Parity- and time-reversal-violating spin coupling to gravity:
//!
//! `V = α GM/(c r³) S·r + β GM/(c² r²) S·v + γ GM/(c² r³) S·(r × v)`
//!
//! with spins in units of ħ. Observables near the earth, conversions between
//! the various parametrizations used by experiments, a two-isotope
//! comagnetometer model and a dataset of existing bounds.

mod hg;
mod limits;

pub use hg::{
    gravitational_couplings, hg_frequencies, hg_gravity_signal, hg_observables, HgCellConfig, HgObservables,
    G_FACTOR_199, G_FACTOR_201, SPIN_199, SPIN_201,
};
pub use limits::{
    alpha_from_limit, evaluate_limits, limits_table, load_limits, ExperimentLimit, LimitEvaluation, LimitKind,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::Constants;
use crate::quantum::{cross3, dot3, norm3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GravityError {
    #[error("missing context field `{0}`")]
    MissingContext(&'static str),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("unknown limit kind `{0}`")]
    UnknownKind(String),
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("invalid comagnetometer config: {0}")]
    InvalidConfig(String),
    #[error("limits dataset corrupt at line {line}: {reason}")]
    DatasetCorrupt { line: usize, reason: String },
}

/// (α, β, γ); general relativity sits at (0, 0, 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinGravityParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SpinGravityParams {
    pub const GENERAL_RELATIVITY: Self = Self {
        alpha: 0.0,
        beta: 0.0,
        gamma: 2.0,
    };

    pub fn alpha_only(alpha: f64) -> Self {
        Self {
            alpha,
            beta: 0.0,
            gamma: 0.0,
        }
    }
}

/// Source body and, where a conversion needs them, test-particle data. SI.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BodyContext {
    /// m³ s⁻²
    pub source_gm: Option<f64>,
    /// m
    pub source_radius: Option<f64>,
    /// kg
    pub test_mass: Option<f64>,
    /// m s⁻¹
    pub velocity: Option<f64>,
    /// eV
    pub photon_energy: Option<f64>,
    /// m
    pub impact_parameter: Option<f64>,
    /// m
    pub wavelength: Option<f64>,
}

impl BodyContext {
    pub fn earth(c: &Constants) -> Self {
        Self {
            source_gm: Some(c.earth.gm),
            source_radius: Some(c.earth.mean_radius),
            ..Self::default()
        }
    }

    fn require(value: Option<f64>, name: &'static str) -> Result<f64, GravityError> {
        value.ok_or(GravityError::MissingContext(name))
    }

    fn require_positive(value: Option<f64>, name: &'static str) -> Result<f64, GravityError> {
        let v = Self::require(value, name)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(GravityError::InvalidContext(format!(
                "{name} must be positive, got {v}"
            )));
        }
        Ok(v)
    }
}

/// Potential energy in J for spin `s` (units of ħ) at separation `r` (m)
/// moving with velocity `v` (m/s).
pub fn spin_potential(
    p: &SpinGravityParams,
    ctx: &BodyContext,
    s: [f64; 3],
    r: [f64; 3],
    v: [f64; 3],
    c: &Constants,
) -> Result<f64, GravityError> {
    let gm = BodyContext::require_positive(ctx.source_gm, "source_gm")?;
    let d = norm3(r);
    if !(d > 0.0) {
        return Err(GravityError::InvalidContext("separation must be nonzero".into()));
    }
    let hbar = c.si.reduced_planck;
    let cl = c.si.speed_of_light;
    let a = p.alpha * gm / (cl * d.powi(3)) * dot3(s, r);
    let b = p.beta * gm / (cl * cl * d * d) * dot3(s, v);
    let g = p.gamma * gm / (cl * cl * d.powi(3)) * dot3(s, cross3(r, v));
    Ok(hbar * (a + b + g))
}

/// (a₊ − a₋)/a = 2αħ/(m c R) at the earth's surface.
pub fn differential_acceleration(alpha: f64, mass: f64, c: &Constants) -> f64 {
    2.0 * alpha * c.si.reduced_planck / (mass * c.si.speed_of_light * c.earth.mean_radius)
}

/// Spin precession about local vertical: (α g/c in rad/s, the same in Hz).
pub fn precession_rate(alpha: f64, c: &Constants) -> (f64, f64) {
    let omega = alpha * c.earth_gravity() / c.si.speed_of_light;
    (omega, omega / std::f64::consts::TAU)
}

/// Energy difference between spins along and against local vertical, eV.
pub fn energy_splitting(alpha: f64, c: &Constants) -> f64 {
    c.joules_to_ev(alpha * c.earth_gravity() / c.si.speed_of_light * c.si.reduced_planck)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    Massive,
    Photon,
}

/// Context kernel `k` with `A = coupling · k`: ħ/(m c r) for massive test
/// particles, ħc/(4 E b) for photons.
pub fn leitner_okubo_kernel(ctx: &BodyContext, which: Probe, c: &Constants) -> Result<f64, GravityError> {
    let hbar = c.si.reduced_planck;
    let cl = c.si.speed_of_light;
    match which {
        Probe::Massive => {
            let m = BodyContext::require_positive(ctx.test_mass, "test_mass")?;
            let r = BodyContext::require_positive(ctx.source_radius, "source_radius")?;
            Ok(hbar / (m * cl * r))
        }
        Probe::Photon => {
            let e = c.ev_to_joules(BodyContext::require_positive(ctx.photon_energy, "photon_energy")?);
            let b = BodyContext::require_positive(ctx.impact_parameter, "impact_parameter")?;
            Ok(hbar * cl / (4.0 * e * b))
        }
    }
}

/// (A₁, A₂) from (α, β).
pub fn leitner_okubo_a(
    p: &SpinGravityParams,
    ctx: &BodyContext,
    which: Probe,
    c: &Constants,
) -> Result<(f64, f64), GravityError> {
    let k = leitner_okubo_kernel(ctx, which, c)?;
    Ok((p.alpha * k, p.beta * k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToAlpha,
    FromAlpha,
}

/// α′ = α λ/(2r) and its inverse.
pub fn harwit_conversion(value: f64, wavelength: f64, r: f64, direction: Direction) -> Result<f64, GravityError> {
    if !(wavelength > 0.0) || !(r > 0.0) {
        return Err(GravityError::InvalidContext(format!(
            "wavelength and radius must be positive, got {wavelength}, {r}"
        )));
    }
    Ok(match direction {
        Direction::ToAlpha => value * 2.0 * r / wavelength,
        Direction::FromAlpha => value * wavelength / (2.0 * r),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Plus,
    Minus,
}

/// ν ± Ω_E cos θ, Hz.
pub fn earth_rotation_correction(nu: f64, theta: f64, sense: Sense, c: &Constants) -> f64 {
    let d = c.earth_rotation_hz() * theta.cos();
    match sense {
        Sense::Plus => nu + d,
        Sense::Minus => nu - d,
    }
}

/// |central| + √(stat² + syst²).
pub fn combine_limit(central: f64, stat: f64, syst: f64) -> f64 {
    central.abs() + stat.hypot(syst)
}
