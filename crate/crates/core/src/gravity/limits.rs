//! Published bounds on the spin–gravity coupling and their conversion to α.
//!
//! Dataset columns: `name, kind, value, units, sensitivity_k, mass_kg,
//! radius_m, photon_energy_ev, impact_parameter_m, wavelength_m,
//! quoted_alpha_bound, note`. Context columns may be empty when the kind
//! does not use them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{energy_splitting, harwit_conversion, leitner_okubo_kernel, BodyContext, Direction, GravityError, Probe};
use crate::constants::Constants;

const BUNDLED: &str = include_str!("../../data/limits.csv");

const COLUMNS: [&str; 12] = [
    "name",
    "kind",
    "value",
    "units",
    "sensitivity_k",
    "mass_kg",
    "radius_m",
    "photon_energy_ev",
    "impact_parameter_m",
    "wavelength_m",
    "quoted_alpha_bound",
    "note",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    /// A bound already expressed as α.
    Alpha,
    /// Energy splitting, eV.
    Energy,
    /// Frequency shift, Hz.
    Frequency,
    A1,
    A2,
    AlphaPrime,
}

impl LimitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LimitKind::Alpha => "alpha",
            LimitKind::Energy => "energy",
            LimitKind::Frequency => "frequency",
            LimitKind::A1 => "a1",
            LimitKind::A2 => "a2",
            LimitKind::AlphaPrime => "alpha_prime",
        }
    }

    /// Multiplier to the kind's base unit (eV, Hz or 1).
    fn unit_scale(&self, units: &str) -> Option<f64> {
        match (self, units) {
            (LimitKind::Energy, "eV") => Some(1.0),
            (LimitKind::Energy, "meV") => Some(1e-3),
            (LimitKind::Energy, "ueV") => Some(1e-6),
            (LimitKind::Frequency, "Hz") => Some(1.0),
            (LimitKind::Frequency, "mHz") => Some(1e-3),
            (LimitKind::Frequency, "uHz") => Some(1e-6),
            (LimitKind::Frequency, "nHz") => Some(1e-9),
            (LimitKind::Alpha | LimitKind::A1 | LimitKind::A2 | LimitKind::AlphaPrime, "1") => Some(1.0),
            _ => None,
        }
    }
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LimitKind {
    type Err = GravityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "alpha" => LimitKind::Alpha,
            "energy" => LimitKind::Energy,
            "frequency" => LimitKind::Frequency,
            "a1" => LimitKind::A1,
            "a2" => LimitKind::A2,
            "alpha_prime" => LimitKind::AlphaPrime,
            other => return Err(GravityError::UnknownKind(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentLimit {
    pub name: String,
    pub kind: LimitKind,
    /// As written in the dataset, in `units`.
    pub value: f64,
    pub units: String,
    /// Experiment-specific sensitivity: α = (raw conversion)/K.
    pub sensitivity_k: f64,
    pub context: BodyContext,
    pub quoted_alpha_bound: f64,
    pub note: String,
}

impl ExperimentLimit {
    /// Value in eV, Hz or dimensionless according to kind.
    pub fn base_value(&self) -> Result<f64, GravityError> {
        self.kind
            .unit_scale(&self.units)
            .map(|s| s * self.value)
            .ok_or_else(|| {
                GravityError::InvalidContext(format!("units `{}` do not fit kind {}", self.units, self.kind))
            })
    }

    fn probe(&self) -> Result<Probe, GravityError> {
        let ctx = &self.context;
        if ctx.photon_energy.is_some() && ctx.impact_parameter.is_some() {
            Ok(Probe::Photon)
        } else if ctx.test_mass.is_some() && ctx.source_radius.is_some() {
            Ok(Probe::Massive)
        } else {
            Err(GravityError::MissingContext(
                "test_mass and source_radius, or photon_energy and impact_parameter",
            ))
        }
    }

    fn check_context(&self) -> Result<(), GravityError> {
        match self.kind {
            LimitKind::A1 | LimitKind::A2 => self.probe().map(|_| ()),
            LimitKind::AlphaPrime => {
                if self.context.wavelength.is_none() {
                    return Err(GravityError::MissingContext("wavelength"));
                }
                if self.context.source_radius.is_none() {
                    return Err(GravityError::MissingContext("source_radius"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// α implied by a bound.
pub fn alpha_from_limit(lim: &ExperimentLimit, c: &Constants) -> Result<f64, GravityError> {
    let v = lim.base_value()?;
    let raw = match lim.kind {
        LimitKind::Alpha => v,
        LimitKind::Energy => v / energy_splitting(1.0, c),
        LimitKind::Frequency => c.joules_to_ev(c.hz_to_joules(v)) / energy_splitting(1.0, c),
        LimitKind::A1 | LimitKind::A2 => v / leitner_okubo_kernel(&lim.context, lim.probe()?, c)?,
        LimitKind::AlphaPrime => {
            let lambda = lim
                .context
                .wavelength
                .ok_or(GravityError::MissingContext("wavelength"))?;
            let r = lim
                .context
                .source_radius
                .ok_or(GravityError::MissingContext("source_radius"))?;
            harwit_conversion(v, lambda, r, Direction::ToAlpha)?
        }
    };
    Ok(raw / lim.sensitivity_k)
}

#[derive(Debug, Deserialize)]
struct Row {
    name: String,
    kind: String,
    value: f64,
    units: String,
    sensitivity_k: f64,
    mass_kg: Option<f64>,
    radius_m: Option<f64>,
    photon_energy_ev: Option<f64>,
    impact_parameter_m: Option<f64>,
    wavelength_m: Option<f64>,
    quoted_alpha_bound: f64,
    #[serde(default)]
    note: String,
}

/// Parses and validates a limits table in the dataset layout.
pub fn load_limits(src: &str) -> Result<Vec<ExperimentLimit>, GravityError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(src.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| GravityError::DatasetCorrupt {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    if headers.iter().ne(COLUMNS.iter().copied()) {
        return Err(GravityError::DatasetCorrupt {
            line: 1,
            reason: format!("expected columns {}", COLUMNS.join(",")),
        });
    }
    let mut out = Vec::new();
    let mut names = HashSet::new();
    for rec in rdr.deserialize::<Row>() {
        let row = rec.map_err(|e| GravityError::DatasetCorrupt {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = out.len() + 2;
        let corrupt = |reason: String| GravityError::DatasetCorrupt { line, reason };
        if row.name.is_empty() {
            return Err(corrupt("empty name".into()));
        }
        if !names.insert(row.name.clone()) {
            return Err(corrupt(format!("duplicate name `{}`", row.name)));
        }
        let kind: LimitKind = row.kind.parse().map_err(|e: GravityError| corrupt(e.to_string()))?;
        for (field, v) in [
            ("value", row.value),
            ("sensitivity_k", row.sensitivity_k),
            ("quoted_alpha_bound", row.quoted_alpha_bound),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(corrupt(format!("{field} must be positive, got {v}")));
            }
        }
        let optional = [
            ("mass_kg", row.mass_kg),
            ("radius_m", row.radius_m),
            ("photon_energy_ev", row.photon_energy_ev),
            ("impact_parameter_m", row.impact_parameter_m),
            ("wavelength_m", row.wavelength_m),
        ];
        for (field, v) in optional {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(corrupt(format!("{field} must be positive, got {v}")));
                }
            }
        }
        let lim = ExperimentLimit {
            name: row.name,
            kind,
            value: row.value,
            units: row.units,
            sensitivity_k: row.sensitivity_k,
            context: BodyContext {
                source_gm: None,
                source_radius: row.radius_m,
                test_mass: row.mass_kg,
                velocity: None,
                photon_energy: row.photon_energy_ev,
                impact_parameter: row.impact_parameter_m,
                wavelength: row.wavelength_m,
            },
            quoted_alpha_bound: row.quoted_alpha_bound,
            note: row.note,
        };
        lim.base_value().map_err(|e| corrupt(e.to_string()))?;
        lim.check_context().map_err(|e| corrupt(e.to_string()))?;
        out.push(lim);
    }
    if out.is_empty() {
        return Err(GravityError::DatasetCorrupt {
            line: 2,
            reason: "no entries".into(),
        });
    }
    Ok(out)
}

/// The bundled dataset of published bounds.
pub fn limits_table() -> Result<Vec<ExperimentLimit>, GravityError> {
    load_limits(BUNDLED)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEvaluation {
    pub name: String,
    pub kind: LimitKind,
    pub value: f64,
    pub units: String,
    pub sensitivity_k: f64,
    pub alpha: f64,
    pub quoted_alpha_bound: f64,
    /// alpha / quoted_alpha_bound
    pub ratio: f64,
    pub within_factor_three: bool,
}

/// Converts every bound and sorts by quoted α, then name.
pub fn evaluate_limits(limits: &[ExperimentLimit], c: &Constants) -> Result<Vec<LimitEvaluation>, GravityError> {
    let mut rows = limits
        .iter()
        .map(|l| {
            let alpha = alpha_from_limit(l, c)?;
            let ratio = alpha / l.quoted_alpha_bound;
            Ok(LimitEvaluation {
                name: l.name.clone(),
                kind: l.kind,
                value: l.value,
                units: l.units.clone(),
                sensitivity_k: l.sensitivity_k,
                alpha,
                quoted_alpha_bound: l.quoted_alpha_bound,
                ratio,
                within_factor_three: (1.0 / 3.0..=3.0).contains(&ratio),
            })
        })
        .collect::<Result<Vec<_>, GravityError>>()?;
    rows.sort_by(|a, b| {
        a.quoted_alpha_bound
            .total_cmp(&b.quoted_alpha_bound)
            .then_with(|| a.name.cmp(&b.name))
    });
    Ok(rows)
}
