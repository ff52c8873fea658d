//! Physical constants, loaded from a versioned TOML table.
//!
//! The bundled table is compiled in; `ADIABATIC_POINTER_CONSTANTS` may
//! point at a replacement file with the same layout.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CONSTANTS_ENV: &str = "ADIABATIC_POINTER_CONSTANTS";

const BUNDLED: &str = include_str!("../data/constants.toml");

#[derive(Debug, Error)]
pub enum ConstantsError {
    #[error("cannot read constants table {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed constants table: {0}")]
    Parse(String),
    #[error("constants table field `{field}` must be positive and finite, got {value}")]
    Invalid { field: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiConstants {
    pub speed_of_light: f64,
    pub planck: f64,
    pub reduced_planck: f64,
    pub elementary_charge: f64,
    pub gravitational_constant: f64,
    pub nuclear_magneton: f64,
    pub electron_mass: f64,
    pub neutron_mass: f64,
    pub atomic_mass_unit: f64,
    pub bohr_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EarthConstants {
    pub gm: f64,
    pub mean_radius: f64,
    pub sidereal_day: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SunConstants {
    pub radius: f64,
}

/// SI values plus the handful of astronomical inputs used by the gravity
/// and Stern–Gerlach modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub version: String,
    pub si: SiConstants,
    pub earth: EarthConstants,
    pub sun: SunConstants,
}

impl Constants {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED).expect("bundled constants table is valid")
    }

    pub fn from_toml_str(src: &str) -> Result<Self, ConstantsError> {
        let c: Constants = toml::from_str(src).map_err(|e| ConstantsError::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConstantsError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConstantsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&src)
    }

    /// The table named by `ADIABATIC_POINTER_CONSTANTS`, else the bundled one.
    pub fn from_env() -> Result<Self, ConstantsError> {
        match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
            _ => Ok(Self::bundled()),
        }
    }

    fn validate(&self) -> Result<(), ConstantsError> {
        let s = &self.si;
        let fields = [
            ("si.speed_of_light", s.speed_of_light),
            ("si.planck", s.planck),
            ("si.reduced_planck", s.reduced_planck),
            ("si.elementary_charge", s.elementary_charge),
            ("si.gravitational_constant", s.gravitational_constant),
            ("si.nuclear_magneton", s.nuclear_magneton),
            ("si.electron_mass", s.electron_mass),
            ("si.neutron_mass", s.neutron_mass),
            ("si.atomic_mass_unit", s.atomic_mass_unit),
            ("si.bohr_radius", s.bohr_radius),
            ("earth.gm", self.earth.gm),
            ("earth.mean_radius", self.earth.mean_radius),
            ("earth.sidereal_day", self.earth.sidereal_day),
            ("sun.radius", self.sun.radius),
        ];
        for (field, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConstantsError::Invalid { field, value });
            }
        }
        if self.version.trim().is_empty() {
            return Err(ConstantsError::Parse("version must not be empty".into()));
        }
        Ok(())
    }

    /// Surface gravity GM/R² of the earth, m s⁻².
    pub fn earth_gravity(&self) -> f64 {
        self.earth.gm / (self.earth.mean_radius * self.earth.mean_radius)
    }

    /// Earth rotation frequency 1/sidereal day, Hz.
    pub fn earth_rotation_hz(&self) -> f64 {
        1.0 / self.earth.sidereal_day
    }

    pub fn joules_to_ev(&self, e: f64) -> f64 {
        e / self.si.elementary_charge
    }

    pub fn ev_to_joules(&self, e: f64) -> f64 {
        e * self.si.elementary_charge
    }

    /// ν = E/h.
    pub fn joules_to_hz(&self, e: f64) -> f64 {
        e / self.si.planck
    }

    pub fn hz_to_joules(&self, nu: f64) -> f64 {
        nu * self.si.planck
    }

    // Gaussian-cgs views.

    /// cm s⁻¹
    pub fn c_cgs(&self) -> f64 {
        self.si.speed_of_light * 1e2
    }

    /// erg s
    pub fn hbar_cgs(&self) -> f64 {
        self.si.reduced_planck * 1e7
    }

    /// erg G⁻¹
    pub fn nuclear_magneton_cgs(&self) -> f64 {
        self.si.nuclear_magneton * 1e3
    }

    /// g
    pub fn amu_grams(&self) -> f64 {
        self.si.atomic_mass_unit * 1e3
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::bundled()
    }
}
