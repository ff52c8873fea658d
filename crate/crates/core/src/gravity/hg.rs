//! Two mercury isotopes sharing one cell. Each precesses at
//!
//! `ν = [−g μ_N (B + B_ran⟨cos θ_ran⟩) + A cos φ] / h`
//!
//! and the combination `S = ν₁₉₉/g₁₉₉ − ν₂₀₁/g₂₀₁` removes every magnetic
//! term, stray or applied.

use serde::{Deserialize, Serialize};

use super::GravityError;
use crate::constants::Constants;

pub const SPIN_199: f64 = 0.5;
pub const SPIN_201: f64 = 1.5;
/// μ/(I μ_N) with μ(¹⁹⁹Hg) = +0.5058855 μ_N.
pub const G_FACTOR_199: f64 = 0.5058855 / SPIN_199;
/// μ/(I μ_N) with μ(²⁰¹Hg) = −0.5602257 μ_N.
pub const G_FACTOR_201: f64 = -0.5602257 / SPIN_201;

/// SI throughout: tesla, joules, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HgCellConfig {
    pub g199: f64,
    pub g201: f64,
    /// J/T
    pub nuclear_magneton: f64,
    pub field: f64,
    pub stray_field: f64,
    /// ⟨cos θ_ran⟩
    pub stray_cos: f64,
    /// Angle between the applied field and local vertical.
    pub phi: f64,
    pub a199: f64,
    pub a201: f64,
}

impl HgCellConfig {
    pub fn new(c: &Constants) -> Self {
        Self {
            g199: G_FACTOR_199,
            g201: G_FACTOR_201,
            nuclear_magneton: c.si.nuclear_magneton,
            field: 1e-6,
            stray_field: 0.0,
            stray_cos: 0.0,
            phi: 0.0,
            a199: 0.0,
            a201: 0.0,
        }
    }

    /// Anomalous couplings set to the gravitational form `α (g/c) ħ I`.
    pub fn with_alpha(mut self, alpha: f64, c: &Constants) -> Self {
        let (a199, a201) = gravitational_couplings(alpha, c);
        self.a199 = a199;
        self.a201 = a201;
        self
    }

    pub fn validate(&self) -> Result<(), GravityError> {
        if self.g199 == 0.0 || self.g201 == 0.0 {
            return Err(GravityError::InvalidConfig("g-factors must be nonzero".into()));
        }
        if self.stray_cos.abs() > 1.0 {
            return Err(GravityError::InvalidConfig(format!(
                "|<cos θ_ran>| must not exceed 1, got {}",
                self.stray_cos
            )));
        }
        let all = [
            self.g199,
            self.g201,
            self.nuclear_magneton,
            self.field,
            self.stray_field,
            self.stray_cos,
            self.phi,
            self.a199,
            self.a201,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(GravityError::InvalidConfig("all fields must be finite".into()));
        }
        Ok(())
    }
}

/// Anomalous energies (J) of the two isotopes for coupling α.
pub fn gravitational_couplings(alpha: f64, c: &Constants) -> (f64, f64) {
    let unit = alpha * c.earth_gravity() / c.si.speed_of_light * c.si.reduced_planck;
    (unit * SPIN_199, unit * SPIN_201)
}

/// (ν₁₉₉, ν₂₀₁) in Hz.
pub fn hg_frequencies(cfg: &HgCellConfig, c: &Constants) -> Result<(f64, f64), GravityError> {
    cfg.validate()?;
    let h = c.si.planck;
    let b = cfg.field + cfg.stray_field * cfg.stray_cos;
    let cos_phi = cfg.phi.cos();
    let nu = |g: f64, a: f64| (-g * cfg.nuclear_magneton * b + a * cos_phi) / h;
    Ok((nu(cfg.g199, cfg.a199), nu(cfg.g201, cfg.a201)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HgObservables {
    pub nu199: f64,
    pub nu201: f64,
    /// ν₁₉₉/ν₂₀₁
    pub r: f64,
    /// ν₁₉₉/g₁₉₉ − ν₂₀₁/g₂₀₁, Hz
    pub s: f64,
}

pub fn hg_observables(cfg: &HgCellConfig, c: &Constants) -> Result<HgObservables, GravityError> {
    let (nu199, nu201) = hg_frequencies(cfg, c)?;
    if cfg.field == 0.0 || nu201 == 0.0 {
        return Err(GravityError::DivisionByZero(
            "R = ν199/ν201 needs a nonzero applied field",
        ));
    }
    let s = (cfg.a199 / cfg.g199 - cfg.a201 / cfg.g201) * cfg.phi.cos() / c.si.planck;
    Ok(HgObservables {
        nu199,
        nu201,
        r: nu199 / nu201,
        s,
    })
}

/// S for purely gravitational couplings,
/// `α (g/c)(ħ/h)(cos φ/2)(g₂₀₁ − 3g₁₉₉)/(g₁₉₉ g₂₀₁)`, Hz.
pub fn hg_gravity_signal(alpha: f64, phi: f64, g199: f64, g201: f64, c: &Constants) -> f64 {
    let rate = alpha * c.earth_gravity() / c.si.speed_of_light / std::f64::consts::TAU;
    rate * 0.5 * phi.cos() * (g201 - 3.0 * g199) / (g199 * g201)
}
