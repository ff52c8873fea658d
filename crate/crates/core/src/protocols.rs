//! Impulsive and protective measurement runs, Born-rule readout of the
//! pointer, and ensemble purity bookkeeping.

use num_complex::Complex64 as C64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{propagate, CouplingProfile, DynamicsError, Eigenbranch, HamiltonianSpec, PropagatorConfig};
use crate::quantum::{
    reduced_density, CompositeState, DensityMatrix, PointerState, QuantumError, SpinOperator, SpinState, Subsystem,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("pointer width {width} is too large to resolve an eigenvalue gap of {gap} (need 10ε < gap)")]
    BranchOverlap { width: f64, gap: f64 },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("pointer marginal has no weight to sample from")]
    EmptyMarginal,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Outcome of a single measurement run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_state: CompositeState,
    pub initial_center: f64,
    /// Pointer displacement `⟨R_A⟩_final − ⟨R_A⟩_initial`.
    pub shift: f64,
    /// ⟨ν|ρ_S|ν⟩ for the reduced spin state after the run.
    pub system_fidelity: f64,
    /// 1 − Tr ρ_S².
    pub linear_entropy: f64,
    /// (center, weight) of each pointer branch.
    pub branch_weights: Vec<(f64, f64)>,
    /// Spin state of the ensemble after the run.
    pub ensemble_rho: DensityMatrix,
    /// The initial spin state ν.
    pub initial_spin: SpinState,
    /// ⟨ν|Q_S|ν⟩.
    pub expected_shift: f64,
}

impl RunResult {
    pub fn shift_error(&self) -> f64 {
        (self.shift - self.expected_shift).abs()
    }

    pub fn infidelity(&self) -> f64 {
        1.0 - self.system_fidelity
    }

    /// Smaller eigenvalue of the reduced spin state of `final_state`, i.e.
    /// the minor Schmidt weight of the spin–pointer state.
    pub fn minor_schmidt_weight(&self) -> f64 {
        normalized_spin_density(&self.final_state).eigenvalues()[0].max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "T")]
    pub total_time: f64,
    pub shift_error: f64,
    pub infidelity: f64,
    pub linear_entropy: f64,
}

fn normalized_spin_density(psi: &CompositeState) -> DensityMatrix {
    let rho = reduced_density(psi, Subsystem::Spin);
    let scale = C64::new(1.0 / rho.trace(), 0.0);
    DensityMatrix::new(rho.matrix() * scale, &Tolerances::default()).unwrap_or(rho)
}

struct Branch {
    value: f64,
    state: SpinState,
    amplitude: C64,
}

fn eigenbranches(nu: &SpinState, q_s: &SpinOperator, pointer: &PointerState) -> Result<Vec<Branch>, ProtocolError> {
    let (vals, vecs) = q_s.eigen();
    let gap = vals[1] - vals[0];
    let width = pointer.width();
    if 10.0 * width >= gap {
        return Err(ProtocolError::BranchOverlap { width, gap });
    }
    Ok(vals
        .iter()
        .zip(vecs)
        .map(|(&value, state)| Branch {
            value,
            amplitude: state.inner(nu),
            state,
        })
        .collect())
}

const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

fn impulsive_result(
    nu: &SpinState,
    q_s: &SpinOperator,
    pointer: &PointerState,
    branches: &[Branch],
    final_state: CompositeState,
) -> Result<RunResult, ProtocolError> {
    let r0 = pointer.center();
    let half = 5.0 * pointer.width();
    let branch_weights = branches
        .iter()
        .filter(|b| b.amplitude.norm_sqr() > NEGLIGIBLE_WEIGHT)
        .map(|b| {
            let c = r0 + b.value;
            (c, final_state.window_weight(c - half, c + half))
        })
        .collect();
    let terms: Vec<(f64, SpinState)> = branches.iter().map(|b| (b.amplitude.norm_sqr(), b.state)).collect();
    let ensemble_rho = DensityMatrix::mixture(&terms, &Tolerances::default())?;
    let spin_rho = normalized_spin_density(&final_state);
    Ok(RunResult {
        initial_center: r0,
        shift: final_state.pointer_center() - r0,
        system_fidelity: spin_rho.fidelity_to(nu)?,
        linear_entropy: ensemble_rho.linear_entropy(),
        branch_weights,
        ensemble_rho,
        initial_spin: *nu,
        expected_shift: q_s.expectation(nu),
        final_state,
    })
}

/// Impulsive measurement: each Q_S eigenbranch `|s_i⟩` drags the pointer by
/// its eigenvalue, `Σ c_i |s_i⟩ ⊗ φ(r − r₀ − s_i)`, free Hamiltonians dropped.
pub fn run_impulsive(nu: &SpinState, q_s: &SpinOperator, pointer: &PointerState) -> Result<RunResult, ProtocolError> {
    let branches = eigenbranches(nu, q_s, pointer)?;
    let terms: Vec<(C64, SpinState, PointerState)> = branches
        .iter()
        .map(|b| (b.amplitude, b.state, pointer.translated(b.value)))
        .collect();
    let final_state = CompositeState::superpose(&terms)?;
    impulsive_result(nu, q_s, pointer, &branches, final_state)
}

/// Same as [`run_impulsive`] but obtained by propagating the bare coupling
/// `g(t)·Q_A·Q_S` over a unit window.
pub fn run_impulsive_propagated(
    nu: &SpinState,
    q_s: &SpinOperator,
    pointer: &PointerState,
    cfg: &PropagatorConfig,
) -> Result<RunResult, ProtocolError> {
    let branches = eigenbranches(nu, q_s, pointer)?;
    let spec = HamiltonianSpec::new(SpinOperator::zero(), q_s.clone(), CouplingProfile::square(1.0)?);
    let final_state = propagate(&CompositeState::tensor(nu, pointer), &spec, cfg)?;
    impulsive_result(nu, q_s, pointer, &branches, final_state)
}

/// Protective measurement of the chosen H_S eigenstate.
pub fn run_protective(
    spec: &HamiltonianSpec,
    pointer: &PointerState,
    which: Eigenbranch,
    cfg: &PropagatorConfig,
    tol: &Tolerances,
) -> Result<RunResult, ProtocolError> {
    spec.check_gap(tol)?;
    let (_, nu) = spec.system_eigenstate(which);
    let r0 = pointer.center();
    let final_state = propagate(&CompositeState::tensor(&nu, pointer), spec, cfg)?;
    let spin_rho = normalized_spin_density(&final_state);
    let center = final_state.pointer_center();
    Ok(RunResult {
        initial_center: r0,
        shift: center - r0,
        system_fidelity: spin_rho.fidelity_to(&nu)?,
        linear_entropy: spin_rho.linear_entropy().max(0.0),
        branch_weights: vec![(center, final_state.norm_sqr())],
        ensemble_rho: spin_rho,
        initial_spin: nu,
        expected_shift: spec.observable.expectation(&nu),
        final_state,
    })
}

/// One position readout and the spin state it leaves behind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readout {
    pub r: f64,
    pub cell: usize,
    pub collapsed_spin: SpinState,
}

/// Precomputed Born distribution over grid cells for repeated readouts.
#[derive(Debug, Clone)]
pub struct ReadoutSampler<'a> {
    result: &'a RunResult,
    dist: WeightedIndex<f64>,
}

impl<'a> ReadoutSampler<'a> {
    pub fn new(result: &'a RunResult) -> Result<Self, ProtocolError> {
        let dist = WeightedIndex::new(result.final_state.marginal()).map_err(|_| ProtocolError::EmptyMarginal)?;
        Ok(Self { result, dist })
    }

    /// Readout with its own generator seeded by `seed`.
    pub fn draw(&self, seed: u64) -> Readout {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cell = self.dist.sample(&mut rng);
        let psi = &self.result.final_state;
        let [a, b] = psi.spin_at(cell);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        Readout {
            r: psi.grid().position(cell),
            cell,
            collapsed_spin: SpinState::from_raw_unchecked([a / n, b / n]),
        }
    }

    /// Fraction of readouts over seeds `first_seed..first_seed + n` whose
    /// collapsed spin has fidelity below one half with the initial state.
    pub fn failure_fraction(&self, first_seed: u64, n: u64) -> f64 {
        let nu = self.result.initial_spin;
        let failures = (first_seed..first_seed + n)
            .into_par_iter()
            .filter(|&s| self.draw(s).collapsed_spin.overlap(&nu) < 0.5)
            .count();
        failures as f64 / n as f64
    }
}

/// Draws one pointer position from |ψ|² and collapses the spin on that cell.
pub fn sample_readout(result: &RunResult, seed: u64) -> Result<Readout, ProtocolError> {
    Ok(ReadoutSampler::new(result)?.draw(seed))
}

/// Exact probability that a cell-level readout leaves a spin with fidelity
/// below one half with the initial state.
pub fn exact_failure_probability(result: &RunResult) -> f64 {
    let psi = &result.final_state;
    let nu = result.initial_spin.amplitudes();
    let dr = psi.grid().dr();
    let total = psi.norm_sqr();
    (0..psi.grid().len())
        .map(|j| {
            let [a, b] = psi.spin_at(j);
            let w = a.norm_sqr() + b.norm_sqr();
            let proj = (nu[0].conj() * a + nu[1].conj() * b).norm_sqr();
            if w > 0.0 && proj < 0.5 * w {
                w * dr
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / total
}

/// Protective runs over an ascending list of coupling times.
pub fn sweep_t(
    spec_template: &HamiltonianSpec,
    pointer: &PointerState,
    which: Eigenbranch,
    t_values: &[f64],
    cfg: &PropagatorConfig,
    tol: &Tolerances,
) -> Result<Vec<SweepRecord>, ProtocolError> {
    if t_values.len() < 3 {
        return Err(ProtocolError::InvalidSweep(format!(
            "need at least 3 T values, got {}",
            t_values.len()
        )));
    }
    if t_values.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(ProtocolError::InvalidSweep("T values must be positive".into()));
    }
    if t_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ProtocolError::InvalidSweep(
            "T values must be strictly ascending".into(),
        ));
    }
    t_values
        .par_iter()
        .map(|&t| {
            let spec = spec_template.with_total_time(t)?;
            let run = run_protective(&spec, pointer, which, cfg, tol)?;
            Ok(SweepRecord {
                total_time: t,
                shift_error: run.shift_error(),
                infidelity: run.infidelity().max(0.0),
                linear_entropy: run.linear_entropy,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleContrast {
    pub impulsive_purity: f64,
    pub protective_purity: f64,
    /// 1 − 2·linear_entropy of the protective run.
    pub protective_floor: f64,
    pub same_initial_state: bool,
}

pub fn ensemble_contrast(impulsive: &RunResult, protective: &RunResult) -> EnsembleContrast {
    EnsembleContrast {
        impulsive_purity: impulsive.ensemble_rho.purity(),
        protective_purity: protective.ensemble_rho.purity(),
        protective_floor: 1.0 - 2.0 * protective.linear_entropy,
        same_initial_state: impulsive.initial_spin.overlap(&protective.initial_spin) > 1.0 - 1e-9,
    }
}
