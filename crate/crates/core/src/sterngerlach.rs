//! Slow-beam Stern–Gerlach realization of a protective measurement.
//!
//! Arithmetic is Gaussian-cgs: fields in gauss, lengths in cm, times in s,
//! masses in amu, magnetic moments in nuclear magnetons. The dimensionless
//! gradient parameter `B̃` enters through the effective field
//! `B(x) = B₀ñ + (B̃ x / (c T)) n` gauss, which makes `B̃` the natural-unit
//! coefficient of `x/T`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::Constants;
use crate::dynamics::{CouplingProfile, DynamicsError, HamiltonianSpec};
use crate::quantum::{cross3, dot3, norm3, QuantumError, SpinOperator, SpinState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SternGerlachError {
    #[error("parameter `{name}` must be {constraint}, got {value}")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("direction `{name}` must be a unit vector (|v| = {norm})")]
    NotUnit { name: &'static str, norm: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SternGerlachParams {
    /// Magnetic moment, nuclear magnetons.
    pub moment: f64,
    /// Static field B₀, gauss.
    pub b0: f64,
    /// Static-field axis ñ.
    pub static_axis: [f64; 3],
    /// Dimensionless gradient parameter B̃.
    pub b_tilde: f64,
    /// Gradient axis n.
    pub gradient_axis: [f64; 3],
    /// Field-region length L, cm.
    pub length: f64,
    /// Beam velocity v, cm/s.
    pub velocity: f64,
    /// Beam width ε, cm.
    pub width: f64,
    /// Atom mass, amu.
    pub mass: f64,
    /// Largest transverse excursion, cm.
    pub x_max: f64,
    /// Free flight after the field region, s.
    pub drift_time: f64,
}

impl Default for SternGerlachParams {
    fn default() -> Self {
        Self {
            moment: 1.0,
            b0: 1.0,
            static_axis: [0.0, 0.0, 1.0],
            b_tilde: 1e11,
            gradient_axis: [0.0, 0.0, 1.0],
            length: 30.0,
            velocity: 1.0,
            width: 0.1,
            mass: 50.0,
            x_max: 1.0,
            drift_time: 30.0,
        }
    }
}

impl SternGerlachParams {
    pub fn validate(&self) -> Result<(), SternGerlachError> {
        let positive = [
            ("moment", self.moment),
            ("b0", self.b0),
            ("length", self.length),
            ("velocity", self.velocity),
            ("width", self.width),
            ("mass", self.mass),
            ("x_max", self.x_max),
            ("drift_time", self.drift_time),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SternGerlachError::InvalidParameter {
                    name,
                    constraint: "positive",
                    value,
                });
            }
        }
        if !(self.b_tilde >= 0.0 && self.b_tilde.is_finite()) {
            return Err(SternGerlachError::InvalidParameter {
                name: "b_tilde",
                constraint: "non-negative",
                value: self.b_tilde,
            });
        }
        for (name, v) in [("static_axis", self.static_axis), ("gradient_axis", self.gradient_axis)] {
            let norm = norm3(v);
            if (norm - 1.0).abs() > 1e-9 {
                return Err(SternGerlachError::NotUnit { name, norm });
            }
        }
        Ok(())
    }

    /// n·ñ
    pub fn alignment(&self) -> f64 {
        dot3(self.static_axis, self.gradient_axis)
    }
}

/// Angle between the effective field at `x` (cm) after coupling time `t`
/// (s) and the static axis, together with the evolved spin state
/// `cos(θ/2) e^{iμBT}|+⟩ + sin(θ/2) e^{−iμBT}|−⟩` in the eigenbasis of σ·B̂.
pub fn effective_field_state(
    p: &SternGerlachParams,
    x: f64,
    t: f64,
    c: &Constants,
) -> Result<(f64, SpinState), SternGerlachError> {
    p.validate()?;
    if !(t > 0.0) {
        return Err(SternGerlachError::InvalidParameter {
            name: "T",
            constraint: "positive",
            value: t,
        });
    }
    let grad = p.b_tilde * x / (c.c_cgs() * t);
    let field: [f64; 3] = std::array::from_fn(|i| p.b0 * p.static_axis[i] + grad * p.gradient_axis[i]);
    let theta = norm3(cross3(field, p.static_axis)).atan2(dot3(field, p.static_axis));
    let b = norm3(field);
    let phase = p.moment * c.nuclear_magneton_cgs() * b * t / c.hbar_cgs();
    let plus = SpinState::along(field)?;
    let minus = plus.orthogonal();
    let cp = C64::from_polar((0.5 * theta).cos(), phase);
    let cm = C64::from_polar((0.5 * theta).sin(), -phase);
    let [p0, p1] = plus.amplitudes();
    let [m0, m1] = minus.amplitudes();
    let state = SpinState::new(cp * p0 + cm * m0, cp * p1 + cm * m1)?;
    Ok((theta, state))
}

/// Transverse wavenumber picked up in the adiabatic limit, μB̃(n·ñ)/(ħc),
/// cm⁻¹.
pub fn momentum_shift(p: &SternGerlachParams, c: &Constants) -> f64 {
    p.moment * c.nuclear_magneton_cgs() * p.b_tilde * p.alignment() / (c.hbar_cgs() * c.c_cgs())
}

/// Free-spreading width `ε(T)² = ½(ε² + (ħT/(Mε))²)`, cm, for `ε` in cm,
/// `T` in s and `M` in amu. At `T = 0` this gives `ε/√2`.
pub fn wavepacket_width(width: f64, t: f64, mass: f64, c: &Constants) -> f64 {
    let spread = c.hbar_cgs() * t / (mass * c.amu_grams() * width);
    (0.5 * (width * width + spread * spread)).sqrt()
}

/// Velocity at which the transit time L/v equals ħ/(μB₀), cm/s.
pub fn critical_velocity(moment: f64, b0: f64, length: f64, c: &Constants) -> f64 {
    moment * c.nuclear_magneton_cgs() * b0 * length / c.hbar_cgs()
}

/// Laboratory gradient B̃v/(cL), G/cm.
pub fn lab_gradient(p: &SternGerlachParams, c: &Constants) -> f64 {
    p.b_tilde * p.velocity / (c.c_cgs() * p.length)
}

/// The same gradient through the rounded relation `(v/v_c)·3B̃·10⁻⁷`, G/cm.
pub fn lab_gradient_rounded(p: &SternGerlachParams, v_c: f64) -> f64 {
    p.velocity / v_c * 3.0 * p.b_tilde * 1e-7
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityThresholds {
    /// Largest accepted B_i·x_max/B₀.
    pub max_weakness: f64,
    /// Smallest accepted P_meas·ε.
    pub min_momentum_ratio: f64,
}

impl Default for FeasibilityThresholds {
    fn default() -> Self {
        Self {
            max_weakness: 0.2,
            min_momentum_ratio: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// cm/s
    pub critical_velocity: f64,
    /// G/cm
    pub lab_gradient: f64,
    /// G/cm, from the rounded `(v/v_c)·3B̃·10⁻⁷` relation
    pub lab_gradient_rounded: f64,
    pub weakness_ratio: f64,
    /// cm⁻¹
    pub p_meas: f64,
    /// cm⁻¹
    pub width_momentum: f64,
    pub momentum_ratio: f64,
    /// cm/s
    pub kick_velocity: f64,
    /// cm
    pub displacement: f64,
    /// ε(0) from the spreading formula, cm; differs from ε by √2
    pub width_at_zero: f64,
    /// ε(drift_time), cm
    pub width_after_drift: f64,
    pub weak_field: bool,
    pub momentum_dominates: bool,
    pub resolvable: bool,
    pub feasible: bool,
}

pub fn feasibility_report(
    p: &SternGerlachParams,
    thresholds: &FeasibilityThresholds,
    c: &Constants,
) -> Result<FeasibilityReport, SternGerlachError> {
    p.validate()?;
    let v_c = critical_velocity(p.moment, p.b0, p.length, c);
    let grad = lab_gradient(p, c);
    let weakness_ratio = grad * p.x_max / p.b0;
    let p_meas = momentum_shift(p, c);
    let momentum_ratio = p_meas * p.width;
    let kick_velocity = c.hbar_cgs() * p_meas / (p.mass * c.amu_grams());
    let displacement = kick_velocity * p.drift_time;
    let weak_field = weakness_ratio <= thresholds.max_weakness;
    let momentum_dominates = momentum_ratio >= thresholds.min_momentum_ratio;
    let resolvable = displacement > p.width;
    Ok(FeasibilityReport {
        critical_velocity: v_c,
        lab_gradient: grad,
        lab_gradient_rounded: lab_gradient_rounded(p, v_c),
        weakness_ratio,
        p_meas,
        width_momentum: 1.0 / p.width,
        momentum_ratio,
        kick_velocity,
        displacement,
        width_at_zero: wavepacket_width(p.width, 0.0, p.mass, c),
        width_after_drift: wavepacket_width(p.width, p.drift_time, p.mass, c),
        weak_field,
        momentum_dominates,
        resolvable,
        feasible: weak_field && momentum_dominates && resolvable,
    })
}

/// Spin part of the set-up in units where μB₀ = 1 and the pointer coordinate
/// is the transverse wavenumber measured in units of μB̃/(ħc). The atom
/// starts in |ñ+⟩, the upper eigenstate of `H_S = σ·ñ`, and the coupling is
/// `Q_A·σ·n` with the heavy-atom `H_A = 0`. Returns the spec and the cm⁻¹
/// value of one pointer unit.
pub fn dimensionless_spec(
    p: &SternGerlachParams,
    total_time: f64,
    c: &Constants,
) -> Result<(HamiltonianSpec, f64), SternGerlachError> {
    p.validate()?;
    let spec = HamiltonianSpec::new(
        SpinOperator::sigma_dot(p.static_axis)?,
        SpinOperator::sigma_dot(p.gradient_axis)?,
        CouplingProfile::square(total_time)?,
    );
    let unit = p.moment * c.nuclear_magneton_cgs() * p.b_tilde / (c.hbar_cgs() * c.c_cgs());
    Ok((spec, unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Eigenbranch, PropagatorConfig};
    use crate::protocols::run_protective;
    use crate::quantum::{PointerGrid, PointerState};
    use crate::tolerance::Tolerances;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn consts() -> Constants {
        Constants::bundled()
    }

    fn tilted(deg: f64) -> SternGerlachParams {
        let a = deg.to_radians();
        SternGerlachParams {
            gradient_axis: [a.sin(), 0.0, a.cos()],
            ..Default::default()
        }
    }

    #[test]
    fn parallel_fields_have_zero_angle() {
        let (theta, s) = effective_field_state(&SternGerlachParams::default(), 0.7, 1e-3, &consts()).unwrap();
        assert_eq!(theta, 0.0);
        assert_abs_diff_eq!(s.overlap(&SpinState::up()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn small_angle_and_adiabatic_limit() {
        let c = consts();
        let p = tilted(90.0);
        let t = 1e3;
        let x = 1.0;
        let ratio = p.b_tilde * x / (c.c_cgs() * t * p.b0);
        let (theta, _) = effective_field_state(&p, x, t, &c).unwrap();
        assert_relative_eq!(theta, ratio, max_relative = 1e-2);
        let (theta2, _) = effective_field_state(&p, x, 2.0 * t, &c).unwrap();
        // independent arctan evaluation
        assert_relative_eq!(theta2, (ratio / 2.0).atan(), max_relative = 1e-12);
        assert_relative_eq!(theta / theta2, 2.0, max_relative = 1e-2);
        let mut last = theta;
        for k in 1..20 {
            let (th, s) = effective_field_state(&p, x, t * 2f64.powi(k), &c).unwrap();
            assert!(th < last);
            last = th;
            let f = s.overlap(&SpinState::up());
            assert!(f >= th.cos().powi(2) - 1e-12);
        }
    }

    #[test]
    fn momentum_shift_properties() {
        let c = consts();
        assert_abs_diff_eq!(momentum_shift(&tilted(90.0), &c), 0.0, epsilon = 1e-9);
        let p = SternGerlachParams::default();
        let base = momentum_shift(&p, &c);
        let doubled = SternGerlachParams {
            b_tilde: 2.0 * p.b_tilde,
            ..p
        };
        assert_relative_eq!(momentum_shift(&doubled, &c), 2.0 * base, max_relative = 1e-14);
        // μ_N·10¹¹ G / (ħc) with μ_N in erg/G
        assert_relative_eq!(base, 1.5977e4, max_relative = 1e-3);
    }

    #[test]
    fn wavepacket_width_limits() {
        let c = consts();
        assert_relative_eq!(
            wavepacket_width(0.1, 0.0, 50.0, &c),
            0.1 / 2f64.sqrt(),
            max_relative = 1e-14
        );
        let eps = 1e-4;
        let t = 1e3;
        let m = 1.0;
        let asym = c.hbar_cgs() * t / (2f64.sqrt() * m * c.amu_grams() * eps);
        assert_relative_eq!(wavepacket_width(eps, t, m, &c), asym, max_relative = 1e-3);
    }

    #[test]
    fn critical_velocity_scaling() {
        let c = consts();
        let v = critical_velocity(1.0, 1.0, 30.0, &c);
        assert_relative_eq!(v, 1.4368e5, max_relative = 1e-3);
        assert_relative_eq!(critical_velocity(1.0, 2.0, 30.0, &c), 2.0 * v, max_relative = 1e-14);
        assert_relative_eq!(critical_velocity(1.0, 1.0, 15.0, &c), 0.5 * v, max_relative = 1e-14);
    }

    #[test]
    fn gradient_and_report() {
        let c = consts();
        let p = SternGerlachParams::default();
        assert_relative_eq!(
            lab_gradient(&p, &c),
            1e11 / (2.99792458e10 * 30.0),
            max_relative = 1e-12
        );
        assert_eq!(lab_gradient(&SternGerlachParams { b_tilde: 0.0, ..p }, &c), 0.0);
        assert_relative_eq!(lab_gradient_rounded(&p, 3e5), 0.1, max_relative = 1e-12);
        let r = feasibility_report(&p, &FeasibilityThresholds::default(), &c).unwrap();
        assert_relative_eq!(r.width_momentum, 10.0, max_relative = 1e-14);
        assert!(r.weak_field && r.momentum_dominates && r.resolvable && r.feasible);
        assert_relative_eq!(r.displacement, r.kick_velocity * 30.0, max_relative = 1e-14);
        let wide = SternGerlachParams { width: 20.0, ..p };
        assert!(
            !feasibility_report(&wide, &FeasibilityThresholds::default(), &c)
                .unwrap()
                .feasible
        );
    }

    #[test]
    fn rejects_invalid_params() {
        let p = SternGerlachParams {
            velocity: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            p.validate(),
            Err(SternGerlachError::InvalidParameter { name: "velocity", .. })
        ));
        let q = SternGerlachParams {
            gradient_axis: [1.0, 1.0, 0.0],
            ..Default::default()
        };
        assert!(matches!(q.validate(), Err(SternGerlachError::NotUnit { .. })));
    }

    #[test]
    fn protective_run_reproduces_momentum_shift() {
        let c = consts();
        let p = tilted(40.0);
        let grid = PointerGrid::new(-4.0, 4.0, 1024).unwrap();
        let pointer = PointerState::gaussian(grid, 0.0, 0.05).unwrap();
        for t in [100.0, 400.0] {
            let (spec, unit) = dimensionless_spec(&p, t, &c).unwrap();
            let run = run_protective(
                &spec,
                &pointer,
                Eigenbranch::Excited,
                &PropagatorConfig::default(),
                &Tolerances::default(),
            )
            .unwrap();
            assert_relative_eq!(run.shift * unit, momentum_shift(&p, &c), max_relative = 0.05);
            assert!(run.system_fidelity > 0.99);
        }
    }
}
