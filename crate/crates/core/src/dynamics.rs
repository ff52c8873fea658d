//! Time evolution under `H(t) = H_A(Q_A) + H_S + g(t)·Q_A·Q_S`.
//!
//! Every term is diagonal in Q_A, so the pointer is moved to Q_A space once
//! and each Q_A eigenvalue `k` carries an independent two-level problem
//! `H_A(k) + H_S + g(t)·k·Q_S`. That problem is advanced by operator
//! splitting between the exact `exp(−i dt H_S)` and the exact coupling
//! factor `exp(−i (G_j k Q_S + dt H_A(k)))`, where `G_j` is the exact
//! integral of `g` over step `j`. Because the H_S factor acts on the spin
//! alone it commutes with the Fourier transform, so no per-step transforms
//! are needed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{CompositeState, QuantumError, Spectral, SpinOperator, SpinState, Unitary2};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("t = {t} lies outside the coupling window [0, {total_time}]")]
    OutOfWindow { t: f64, total_time: f64 },
    #[error("invalid coupling profile: {0}")]
    InvalidProfile(String),
    #[error("invalid propagator config: {0}")]
    InvalidConfig(String),
    #[error("step doubling changed the final state by {difference:e} (bound {bound:e})")]
    NonConverged { difference: f64, bound: f64 },
    #[error("norm drifted by {drift:e} (bound {bound:e})")]
    NormDrift { drift: f64, bound: f64 },
    #[error("system Hamiltonian gap {gap:e} is below the minimum {min_gap:e}")]
    DegenerateSystem { gap: f64, min_gap: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileKind {
    /// g = 1/T on [0, T].
    Square,
    /// sin² ramps of length `ramp_fraction·T` at both ends, flat in between.
    Smooth { ramp_fraction: f64 },
}

/// Coupling strength g(t) on [0, T], normalized to ∫g dt = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    pub kind: ProfileKind,
    pub total_time: f64,
}

impl CouplingProfile {
    pub fn square(total_time: f64) -> Result<Self, DynamicsError> {
        Self::new(ProfileKind::Square, total_time)
    }

    pub fn smooth(total_time: f64, ramp_fraction: f64) -> Result<Self, DynamicsError> {
        Self::new(ProfileKind::Smooth { ramp_fraction }, total_time)
    }

    pub fn new(kind: ProfileKind, total_time: f64) -> Result<Self, DynamicsError> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(DynamicsError::InvalidProfile(format!(
                "total_time must be positive, got {total_time}"
            )));
        }
        if let ProfileKind::Smooth { ramp_fraction } = kind {
            if !(ramp_fraction > 0.0 && ramp_fraction <= 0.25) {
                return Err(DynamicsError::InvalidProfile(format!(
                    "ramp_fraction must lie in (0, 0.25], got {ramp_fraction}"
                )));
            }
        }
        Ok(Self { kind, total_time })
    }

    pub fn with_total_time(&self, total_time: f64) -> Result<Self, DynamicsError> {
        Self::new(self.kind, total_time)
    }

    fn ramp(&self) -> f64 {
        match self.kind {
            ProfileKind::Square => 0.0,
            ProfileKind::Smooth { ramp_fraction } => ramp_fraction * self.total_time,
        }
    }

    /// ∫₀ᵀ of the unnormalized shape.
    fn shape_area(&self) -> f64 {
        self.total_time - self.ramp()
    }

    /// Antiderivative of the unnormalized shape, clamped to [0, T].
    fn shape_antiderivative(&self, t: f64) -> f64 {
        let total = self.total_time;
        let t = t.clamp(0.0, total);
        let tau = self.ramp();
        if tau == 0.0 {
            return t;
        }
        let rise = |s: f64| 0.5 * s - tau / (2.0 * std::f64::consts::PI) * (std::f64::consts::PI * s / tau).sin();
        if t <= tau {
            rise(t)
        } else if t <= total - tau {
            0.5 * tau + (t - tau)
        } else {
            self.shape_area() - rise(total - t)
        }
    }

    /// g(t).
    pub fn value(&self, t: f64) -> Result<f64, DynamicsError> {
        let total = self.total_time;
        if !(0.0..=total).contains(&t) {
            return Err(DynamicsError::OutOfWindow { t, total_time: total });
        }
        let tau = self.ramp();
        let shape = if tau == 0.0 {
            1.0
        } else if t < tau {
            (std::f64::consts::PI * t / (2.0 * tau)).sin().powi(2)
        } else if t > total - tau {
            (std::f64::consts::PI * (total - t) / (2.0 * tau)).sin().powi(2)
        } else {
            1.0
        };
        Ok(shape / self.shape_area())
    }

    /// ∫ₐᵇ g(t) dt in closed form (limits clamped to the window).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        (self.shape_antiderivative(b) - self.shape_antiderivative(a)) / self.shape_area()
    }
}

/// Assembly instructions for `H(t) = H_A(Q_A) + H_S + g(t) Q_A Q_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    /// H_S.
    pub system: SpinOperator,
    /// Q_S.
    pub observable: SpinOperator,
    /// Coefficients `c_j` of `H_A = Σ_j c_j Q_A^j`; empty means H_A = 0.
    pub apparatus: Vec<f64>,
    pub profile: CouplingProfile,
}

impl HamiltonianSpec {
    pub fn new(system: SpinOperator, observable: SpinOperator, profile: CouplingProfile) -> Self {
        Self {
            system,
            observable,
            apparatus: Vec::new(),
            profile,
        }
    }

    pub fn with_apparatus(mut self, coefficients: Vec<f64>) -> Self {
        self.apparatus = coefficients;
        self
    }

    pub fn with_total_time(&self, total_time: f64) -> Result<Self, DynamicsError> {
        Ok(Self {
            profile: self.profile.with_total_time(total_time)?,
            ..self.clone()
        })
    }

    /// −H(t), used for time-reversal checks.
    pub fn negated(&self) -> Self {
        Self {
            system: self.system.scaled(-1.0),
            observable: self.observable.scaled(-1.0),
            apparatus: self.apparatus.iter().map(|c| -c).collect(),
            profile: self.profile,
        }
    }

    /// H_A evaluated at the Q_A eigenvalue `q`.
    pub fn apparatus_energy(&self, q: f64) -> f64 {
        self.apparatus.iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    /// Eigenstate of H_S for the requested branch.
    pub fn system_eigenstate(&self, branch: Eigenbranch) -> (f64, SpinState) {
        let (vals, vecs) = self.system.eigen();
        match branch {
            Eigenbranch::Ground => (vals[0], vecs[0]),
            Eigenbranch::Excited => (vals[1], vecs[1]),
        }
    }

    pub fn check_gap(&self, tol: &Tolerances) -> Result<(), DynamicsError> {
        let gap = self.system.gap();
        if gap < tol.min_gap {
            return Err(DynamicsError::DegenerateSystem {
                gap,
                min_gap: tol.min_gap,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eigenbranch {
    Ground,
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    FirstOrder,
    Strang,
}

impl Splitting {
    pub fn order(&self) -> u32 {
        match self {
            Splitting::FirstOrder => 1,
            Splitting::Strang => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    pub n_steps: usize,
    pub splitting: Splitting,
    /// When set, the step count is raised to at least `ceil(T / max_dt)`.
    pub max_dt: Option<f64>,
    /// When set, the run is repeated with twice the steps and rejected if
    /// the two final states differ by more than this L2 distance.
    pub convergence_tol: Option<f64>,
    /// Largest accepted |‖ψ(T)‖² − ‖ψ(0)‖²|.
    pub norm_tol: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            n_steps: 1000,
            splitting: Splitting::Strang,
            max_dt: Some(0.1),
            convergence_tol: None,
            norm_tol: Tolerances::default().composite_norm,
        }
    }
}

impl PropagatorConfig {
    pub fn fixed(n_steps: usize, splitting: Splitting) -> Self {
        Self {
            n_steps,
            splitting,
            max_dt: None,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.n_steps < 10 {
            return Err(DynamicsError::InvalidConfig(format!(
                "n_steps must be at least 10, got {}",
                self.n_steps
            )));
        }
        if let Some(dt) = self.max_dt {
            if !(dt > 0.0) {
                return Err(DynamicsError::InvalidConfig(format!(
                    "max_dt must be positive, got {dt}"
                )));
            }
        }
        if let Some(tol) = self.convergence_tol {
            if !(tol > 0.0) {
                return Err(DynamicsError::InvalidConfig(format!(
                    "convergence_tol must be positive, got {tol}"
                )));
            }
        }
        if !(self.norm_tol > 0.0) {
            return Err(DynamicsError::InvalidConfig("norm_tol must be positive".into()));
        }
        Ok(())
    }

    /// Step count actually used for a window of length `total_time`.
    pub fn steps_for(&self, total_time: f64) -> usize {
        match self.max_dt {
            Some(dt) => self.n_steps.max((total_time / dt).ceil() as usize),
            None => self.n_steps,
        }
    }
}

/// Propagates `psi0` from t = 0 to t = T.
pub fn propagate(
    psi0: &CompositeState,
    spec: &HamiltonianSpec,
    cfg: &PropagatorConfig,
) -> Result<CompositeState, DynamicsError> {
    cfg.validate()?;
    let n = cfg.steps_for(spec.profile.total_time);
    let mut out = evolve(psi0, spec, n, cfg.splitting);
    if let Some(bound) = cfg.convergence_tol {
        let finer = evolve(psi0, spec, 2 * n, cfg.splitting);
        let difference = out.distance(&finer);
        if difference > bound {
            return Err(DynamicsError::NonConverged { difference, bound });
        }
        out = finer;
    }
    let drift = (out.norm_sqr() - psi0.norm_sqr()).abs();
    if drift > cfg.norm_tol {
        return Err(DynamicsError::NormDrift {
            drift,
            bound: cfg.norm_tol,
        });
    }
    Ok(out)
}

/// Fixed-step evolution with `n_steps` splitting steps.
pub fn evolve(psi0: &CompositeState, spec: &HamiltonianSpec, n_steps: usize, splitting: Splitting) -> CompositeState {
    let grid = *psi0.grid();
    let total = spec.profile.total_time;
    let dt = total / n_steps as f64;
    let spectral = Spectral::new(grid.len());
    let ks = grid.wavenumbers();

    let mut psi = psi0.clone();
    let (up, down) = psi.components_mut();
    spectral.forward(up);
    spectral.forward(down);

    let step_integrals: Vec<f64> = (0..n_steps)
        .map(|j| spec.profile.integral(j as f64 * dt, (j + 1) as f64 * dt))
        .collect();
    let constant_coupling = matches!(spec.profile.kind, ProfileKind::Square);

    let (q0, q) = spec.observable.pauli();
    let coupling = |k: f64, g_int: f64| {
        let phase = g_int * k * q0 + dt * spec.apparatus_energy(k);
        Unitary2::exp_pauli(phase, [g_int * k * q[0], g_int * k * q[1], g_int * k * q[2]])
    };
    let full = spec.system.evolution(dt);
    let half = spec.system.evolution(0.5 * dt);

    for (m, &k) in ks.iter().enumerate() {
        let mut v = [up[m], down[m]];
        let fixed = constant_coupling.then(|| coupling(k, step_integrals[0]));
        match splitting {
            Splitting::Strang => {
                v = half.apply(v);
                for (j, &g_int) in step_integrals.iter().enumerate() {
                    let c = fixed.unwrap_or_else(|| coupling(k, g_int));
                    v = c.apply(v);
                    v = if j + 1 == n_steps { half.apply(v) } else { full.apply(v) };
                }
            }
            Splitting::FirstOrder => {
                for &g_int in &step_integrals {
                    let c = fixed.unwrap_or_else(|| coupling(k, g_int));
                    v = full.apply(c.apply(v));
                }
            }
        }
        up[m] = v[0];
        down[m] = v[1];
    }

    spectral.inverse(up);
    spectral.inverse(down);
    psi
}

/// Exact and first-order eigenvalues of `H_A(a) + H_S + g(t)·a·Q_S` for the
/// branch that continues the chosen H_S eigenstate.
pub fn instantaneous_energies(
    spec: &HamiltonianSpec,
    a: f64,
    t: f64,
    branch: Eigenbranch,
    tol: &Tolerances,
) -> Result<(f64, f64), DynamicsError> {
    spec.check_gap(tol)?;
    let g = spec.profile.value(t)?;
    let ha = spec.apparatus_energy(a);
    let h = spec.system.plus(&spec.observable.scaled(g * a));
    let (vals, _) = h.eigen();
    let exact = match branch {
        Eigenbranch::Ground => vals[0],
        Eigenbranch::Excited => vals[1],
    } + ha;
    let (e_nu, nu) = spec.system_eigenstate(branch);
    let first_order = ha + e_nu + g * a * spec.observable.expectation(&nu);
    Ok((exact, first_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{PointerGrid, PointerState};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn sixty_degree_observable() -> SpinOperator {
        let t = PI / 3.0;
        SpinOperator::sigma_dot([t.sin(), 0.0, t.cos()]).unwrap()
    }

    #[test]
    fn coupling_values() {
        let sq = CouplingProfile::square(10.0).unwrap();
        assert_eq!(sq.value(5.0).unwrap(), 0.1);
        assert_eq!(sq.value(0.0).unwrap(), 0.1);
        assert!(matches!(sq.value(10.5), Err(DynamicsError::OutOfWindow { .. })));
        assert!(matches!(sq.value(-0.1), Err(DynamicsError::OutOfWindow { .. })));

        let sm = CouplingProfile::smooth(10.0, 0.1).unwrap();
        assert_eq!(sm.value(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(sm.value(10.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(CouplingProfile::smooth(10.0, 0.3).is_err());
        assert!(CouplingProfile::smooth(10.0, 0.0).is_err());
        assert!(CouplingProfile::square(-1.0).is_err());
    }

    /// Composite Gauss–Legendre quadrature of g, independent of the closed
    /// form used by `integral`.
    fn quadrature(p: &CouplingProfile, panels: usize) -> f64 {
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let h = p.total_time / panels as f64;
        let mut acc = 0.0;
        for i in 0..panels {
            let mid = (i as f64 + 0.5) * h;
            for (x, w) in nodes {
                acc += w * 0.5 * h * p.value(mid + 0.5 * h * x).unwrap();
            }
        }
        acc
    }

    #[test]
    fn profiles_integrate_to_one() {
        for p in [
            CouplingProfile::square(10.0).unwrap(),
            CouplingProfile::smooth(10.0, 0.1).unwrap(),
            CouplingProfile::smooth(37.0, 0.25).unwrap(),
        ] {
            // panels aligned with the ramp boundaries keep the quadrature exact
            // to round-off on each smooth piece
            assert_abs_diff_eq!(quadrature(&p, 400), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(p.integral(0.0, p.total_time), 1.0, epsilon = 1e-14);
        }
        let p = CouplingProfile::smooth(10.0, 0.1).unwrap();
        let parts: f64 = (0..7)
            .map(|j| p.integral(j as f64 * 10.0 / 7.0, (j + 1) as f64 * 10.0 / 7.0))
            .sum();
        assert_abs_diff_eq!(parts, 1.0, epsilon = 1e-14);
    }

    fn pointer() -> PointerState {
        let g = PointerGrid::new(-4.0, 4.0, 512).unwrap();
        PointerState::gaussian(g, 0.0, 0.1).unwrap()
    }

    #[test]
    fn pure_coupling_translates_pointer() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::zero(),
            SpinOperator::sigma_z(),
            CouplingProfile::square(3.0).unwrap(),
        );
        let psi0 = CompositeState::tensor(&SpinState::up(), &p);
        let out = propagate(&psi0, &spec, &PropagatorConfig::fixed(10, Splitting::Strang)).unwrap();
        assert_abs_diff_eq!(out.pointer_center(), 1.0, epsilon = 1e-10);
        let expected = CompositeState::tensor(&SpinState::up(), &p.translated(1.0));
        assert!(out.distance(&expected) < 1e-10);
    }

    #[test]
    fn superposition_splits_into_two_branches() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::zero(),
            SpinOperator::sigma_z(),
            CouplingProfile::square(1.0).unwrap(),
        );
        let s = SpinState::new(FRAC_1_SQRT_2.into(), FRAC_1_SQRT_2.into()).unwrap();
        let out = propagate(
            &CompositeState::tensor(&s, &p),
            &spec,
            &PropagatorConfig::fixed(10, Splitting::FirstOrder),
        )
        .unwrap();
        // ±5ε windows leave a Gaussian tail of about 6e-7
        assert_abs_diff_eq!(out.window_weight(0.5, 1.5), 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(out.window_weight(-1.5, -0.5), 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(out.window_weight(0.0, 4.0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn commuting_case_is_exact_at_any_step_count() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::sigma_z().scaled(-1.0),
            SpinOperator::sigma_z(),
            CouplingProfile::square(50.0).unwrap(),
        );
        let psi0 = CompositeState::tensor(&SpinState::up(), &p);
        let a = evolve(&psi0, &spec, 10, Splitting::Strang);
        let b = evolve(&psi0, &spec, 997, Splitting::FirstOrder);
        assert!(a.distance(&b) < 1e-10);
        assert_abs_diff_eq!(a.pointer_center(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn time_reversal_recovers_initial_state() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::from_pauli(0.1, [0.3, -0.2, -1.0], "H_S"),
            sixty_degree_observable(),
            CouplingProfile::square(20.0).unwrap(),
        )
        .with_apparatus(vec![0.0, 0.2, 0.01]);
        let psi0 = CompositeState::tensor(&SpinState::from_angles(0.7, 0.4), &p);
        let cfg = PropagatorConfig::fixed(400, Splitting::Strang);
        let fwd = propagate(&psi0, &spec, &cfg).unwrap();
        let back = propagate(&fwd, &spec.negated(), &cfg).unwrap();
        let fid = psi0.inner(&back).norm_sqr();
        assert!(fid >= 1.0 - 1e-8, "fidelity {fid}");
    }

    #[test]
    fn convergence_check_flags_coarse_runs() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::sigma_z().scaled(-1.0),
            SpinOperator::sigma_x(),
            CouplingProfile::square(20.0).unwrap(),
        );
        let psi0 = CompositeState::tensor(&SpinState::up(), &p);
        let mut cfg = PropagatorConfig::fixed(10, Splitting::FirstOrder);
        cfg.convergence_tol = Some(1e-8);
        assert!(matches!(
            propagate(&psi0, &spec, &cfg),
            Err(DynamicsError::NonConverged { .. })
        ));
        cfg.convergence_tol = Some(10.0);
        assert!(propagate(&psi0, &spec, &cfg).is_ok());
    }

    #[test]
    fn rejects_too_few_steps() {
        let p = pointer();
        let spec = HamiltonianSpec::new(
            SpinOperator::zero(),
            SpinOperator::sigma_z(),
            CouplingProfile::square(1.0).unwrap(),
        );
        let psi0 = CompositeState::tensor(&SpinState::up(), &p);
        assert!(matches!(
            propagate(&psi0, &spec, &PropagatorConfig::fixed(5, Splitting::Strang)),
            Err(DynamicsError::InvalidConfig(_))
        ));
    }

    #[test]
    fn energies_commuting_case_agree() {
        let spec = HamiltonianSpec::new(
            SpinOperator::sigma_z().scaled(-1.0),
            SpinOperator::sigma_z(),
            CouplingProfile::square(100.0).unwrap(),
        );
        let tol = Tolerances::default();
        for a in [-3.0, 0.0, 2.5] {
            let (exact, first) = instantaneous_energies(&spec, a, 10.0, Eigenbranch::Ground, &tol).unwrap();
            assert_abs_diff_eq!(exact, first, epsilon = 1e-14);
        }
        let (exact, first) = instantaneous_energies(&spec, 0.0, 3.0, Eigenbranch::Excited, &tol).unwrap();
        assert_eq!((exact, first), (1.0, 1.0));
    }

    #[test]
    fn energies_transverse_case_matches_closed_form() {
        // H_S = −σz, Q_S = σx, a·g = 0.01: exact ground −√(1 + 0.01²)
        let spec = HamiltonianSpec::new(
            SpinOperator::sigma_z().scaled(-1.0),
            SpinOperator::sigma_x(),
            CouplingProfile::square(100.0).unwrap(),
        );
        let (exact, first) =
            instantaneous_energies(&spec, 1.0, 50.0, Eigenbranch::Ground, &Tolerances::default()).unwrap();
        let x: f64 = 0.01;
        assert_abs_diff_eq!(exact, -(1.0 + x * x).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(first, -1.0, epsilon = 1e-15);
        // second-order remainder x²/2 over a gap of 2 in the units of H_S
        assert_abs_diff_eq!(first - exact, x * x / 2.0, epsilon = 1e-8);
    }

    #[test]
    fn energies_reject_degenerate_system() {
        let spec = HamiltonianSpec::new(
            SpinOperator::zero(),
            SpinOperator::sigma_x(),
            CouplingProfile::square(1.0).unwrap(),
        );
        assert!(matches!(
            instantaneous_energies(&spec, 1.0, 0.5, Eigenbranch::Ground, &Tolerances::default()),
            Err(DynamicsError::DegenerateSystem { .. })
        ));
    }

    #[test]
    fn first_order_remainder_scales_as_inverse_square_time() {
        let base = HamiltonianSpec::new(
            SpinOperator::sigma_z().scaled(-1.0),
            sixty_degree_observable(),
            CouplingProfile::square(100.0).unwrap(),
        );
        let tol = Tolerances::default();
        let a = 5.0;
        let remainder = |t: f64| {
            let s = base.with_total_time(t).unwrap();
            let (e, f) = instantaneous_energies(&s, a, 0.5 * t, Eigenbranch::Ground, &tol).unwrap();
            (e - f).abs()
        };
        let ratio = remainder(100.0) / remainder(200.0);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn apparatus_polynomial() {
        let spec = HamiltonianSpec::new(
            SpinOperator::zero(),
            SpinOperator::zero(),
            CouplingProfile::square(1.0).unwrap(),
        )
        .with_apparatus(vec![1.0, -2.0, 0.5]);
        assert_abs_diff_eq!(spec.apparatus_energy(2.0), 1.0 - 4.0 + 2.0, epsilon = 1e-15);
    }
}
