//! Spin-1/2 ⊗ 1-D pointer state and operator algebra, together with the
//! scalar diagnostics every protocol reports (purity, fidelity, centers).

mod density;
mod pointer;
mod spin;

pub use density::{reduced_density, DensityMatrix, Subsystem};
pub(crate) use pointer::Spectral;
pub use pointer::{CompositeState, PointerGrid, PointerState};
pub(crate) use spin::{cross3, dot3, norm3};
pub use spin::{SpinOperator, SpinState, Unitary2};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state has zero norm")]
    ZeroState,
    #[error("direction vector has zero length")]
    ZeroVector,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid pointer: {0}")]
    InvalidPointer(String),
    #[error("pointer support [{:.4}, {:.4}] is not inside the grid [{:.4}, {:.4}]", .support.0, .support.1, .grid.0, .grid.1)]
    GridTooNarrow { support: (f64, f64), grid: (f64, f64) },
    #[error("states live on different grids")]
    GridMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
}

/// +1 eigenstate of σ·n(θ, φ).
pub fn make_spin_state(theta: f64, phi: f64) -> SpinState {
    SpinState::from_angles(theta, phi)
}

/// Normalized Gaussian pointer with ⟨R_A⟩ = r₀ and ⟨(R_A − r₀)²⟩ = ε².
pub fn make_gaussian_pointer(grid: PointerGrid, center: f64, width: f64) -> Result<PointerState, QuantumError> {
    PointerState::gaussian(grid, center, width)
}

pub fn tensor(s: &SpinState, p: &PointerState) -> CompositeState {
    CompositeState::tensor(s, p)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn fidelity_to(rho: &DensityMatrix, nu: &SpinState) -> Result<f64, QuantumError> {
    rho.fidelity_to(nu)
}

pub fn expectation(op: &SpinOperator, s: &SpinState) -> f64 {
    op.expectation(s)
}

#[cfg(test)]
mod properties {
    use super::*;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
            .prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
    }

    proptest! {
        #[test]
        fn sigma_dot_has_unit_eigenvalues(n in unit_vector()) {
            let op = SpinOperator::sigma_dot(n).unwrap();
            let (vals, vecs) = op.eigen();
            prop_assert!((vals[0] + 1.0).abs() < 1e-12);
            prop_assert!((vals[1] - 1.0).abs() < 1e-12);
            // independent check: direct characteristic polynomial of the matrix
            let m = op.matrix();
            let tr = (m[(0, 0)] + m[(1, 1)]).re;
            let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
            prop_assert!(tr.abs() < 1e-12);
            prop_assert!((det + 1.0).abs() < 1e-12);
            for (v, e) in vecs.iter().zip(vals) {
                let av = op.apply(v);
                prop_assert!((av[0] - v.up_amp() * e).norm() < 1e-12);
                prop_assert!((av[1] - v.down_amp() * e).norm() < 1e-12);
            }
        }

        #[test]
        fn partial_trace_reproduces_local_expectations(
            h0 in -1.0..1.0f64, hx in -1.0..1.0f64, hy in -1.0..1.0f64, hz in -1.0..1.0f64,
            t1 in 0.0..3.1f64, p1 in 0.0..6.2f64, t2 in 0.0..3.1f64, p2 in 0.0..6.2f64,
            w in 0.05..0.95f64, sep in 0.0..2.0f64,
        ) {
            let grid = PointerGrid::new(-4.0, 4.0, 128).unwrap();
            let ptr = PointerState::gaussian(grid, 0.0, 0.3).unwrap();
            let psi = CompositeState::superpose(&[
                (C64::new(w.sqrt(), 0.0), make_spin_state(t1, p1), ptr.translated(sep / 2.0)),
                (C64::new((1.0 - w).sqrt(), 0.3), make_spin_state(t2, p2), ptr.translated(-sep / 2.0)),
            ]).unwrap();
            let norm = psi.norm_sqr();
            let op = SpinOperator::from_pauli(h0, [hx, hy, hz], "A");
            // ⟨ψ|A ⊗ 1|ψ⟩ evaluated directly on the grid
            let m = op.matrix();
            let direct: f64 = psi.up().iter().zip(psi.down()).map(|(u, d)| {
                let au = m[(0, 0)] * u + m[(0, 1)] * d;
                let ad = m[(1, 0)] * u + m[(1, 1)] * d;
                (u.conj() * au + d.conj() * ad).re
            }).sum::<f64>() * grid.dr() / norm;
            let rho = reduced_density(&psi, Subsystem::Spin);
            let via_rho = rho.expectation(&op).unwrap() / norm;
            prop_assert!((direct - via_rho).abs() < 1e-10);
            let rho_n = DensityMatrix::new(rho.matrix() / C64::new(norm, 0.0), &Default::default()).unwrap();
            let p = rho_n.purity();
            prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&p));
        }
    }
}
