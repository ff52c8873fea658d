//! Numerical tolerances shared across the crate.
//!
//! The defaults sit roughly two orders of magnitude above double-precision
//! round-off accumulated over up to 10⁶ grid points or time steps. The strict
//! profile tightens every bound by a factor of ten.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// |a₊|² + |a₋|² = 1 for spin states.
    pub spin_norm: f64,
    /// Σ|ψ_k|²·Δr = 1 for freshly built pointer states.
    pub pointer_norm: f64,
    /// Norm of a composite state after any evolution.
    pub composite_norm: f64,
    /// Hermiticity of operators and density matrices.
    pub hermitian: f64,
    /// |Tr ρ − 1|.
    pub trace: f64,
    /// Most negative eigenvalue accepted for a density matrix.
    pub eigenvalue_floor: f64,
    /// Smallest eigenvalue gap of H_S accepted for protective runs.
    pub min_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spin_norm: 1e-12,
            pointer_norm: 1e-10,
            composite_norm: 1e-9,
            hermitian: 1e-12,
            trace: 1e-12,
            eigenvalue_floor: 1e-10,
            min_gap: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn strict() -> Self {
        let d = Self::default();
        Self {
            spin_norm: d.spin_norm / 10.0,
            pointer_norm: d.pointer_norm / 10.0,
            composite_norm: d.composite_norm / 10.0,
            hermitian: d.hermitian / 10.0,
            trace: d.trace / 10.0,
            eigenvalue_floor: d.eigenvalue_floor / 10.0,
            min_gap: d.min_gap * 10.0,
        }
    }
}
