use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use super::pointer::CompositeState;
use super::spin::{SpinOperator, SpinState};
use super::QuantumError;
use crate::tolerance::Tolerances;

/// Which factor of spin ⊗ pointer to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Spin,
    Pointer,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants against `tol`.
    pub fn new(data: DMatrix<C64>, tol: &Tolerances) -> Result<Self, QuantumError> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(QuantumError::DimensionMismatch {
                expected: data.nrows(),
                found: data.ncols(),
            });
        }
        let herm = (&data - data.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > tol.hermitian {
            return Err(QuantumError::NotHermitian { deviation: herm });
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(QuantumError::BadTrace { trace: tr.re });
        }
        let rho = Self { data };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -tol.eigenvalue_floor {
            return Err(QuantumError::NegativeEigenvalue { value: min });
        }
        Ok(rho)
    }

    /// |s⟩⟨s|
    pub fn pure(s: &SpinState) -> Self {
        let [a, b] = s.amplitudes();
        let m = Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj());
        Self {
            data: DMatrix::from_iterator(2, 2, m.iter().cloned()),
        }
    }

    /// Σ p_i |s_i⟩⟨s_i|, with weights that must sum to one.
    pub fn mixture(terms: &[(f64, SpinState)], tol: &Tolerances) -> Result<Self, QuantumError> {
        let mut data = DMatrix::<C64>::zeros(2, 2);
        for (p, s) in terms {
            data += Self::pure(s).data * C64::new(*p, 0.0);
        }
        Self::new(data, tol)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Tr ρ², evaluated as Σ|ρ_ij|² (valid for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// 1 − Tr ρ².
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 2 {
            // closed form keeps the 2×2 case exact to round-off
            let a = self.data[(0, 0)].re;
            let d = self.data[(1, 1)].re;
            let b = self.data[(0, 1)];
            let mean = 0.5 * (a + d);
            let rad = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
            return vec![mean - rad, mean + rad];
        }
        let mut ev: Vec<f64> = self.data.clone().symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(|x, y| x.total_cmp(y));
        ev
    }

    /// ⟨ν|ρ|ν⟩.
    pub fn fidelity_to(&self, nu: &SpinState) -> Result<f64, QuantumError> {
        if self.dim() != 2 {
            return Err(QuantumError::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let [a, b] = nu.amplitudes();
        let r = &self.data;
        let v = a.conj() * (r[(0, 0)] * a + r[(0, 1)] * b) + b.conj() * (r[(1, 0)] * a + r[(1, 1)] * b);
        Ok(v.re.clamp(0.0, 1.0))
    }

    /// Tr(ρ A) for a spin operator.
    pub fn expectation(&self, op: &SpinOperator) -> Result<f64, QuantumError> {
        if self.dim() != 2 {
            return Err(QuantumError::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let m = op.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += self.data[(i, j)] * m[(j, i)];
            }
        }
        Ok(acc.re)
    }
}

/// Partial trace of a composite state over the complementary factor.
///
/// The pointer-side matrix is expressed in the normalized grid basis
/// `√Δr·δ(r − r_k)`, so its trace is one.
pub fn reduced_density(psi: &CompositeState, keep: Subsystem) -> DensityMatrix {
    let dr = psi.grid().dr();
    match keep {
        Subsystem::Spin => {
            let (u, d) = (psi.up(), psi.down());
            let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>() * dr;
            let dd: f64 = d.iter().map(|z| z.norm_sqr()).sum::<f64>() * dr;
            let ud: C64 = u.iter().zip(d).map(|(a, b)| a * b.conj()).sum::<C64>() * dr;
            let data = DMatrix::from_row_slice(2, 2, &[C64::new(uu, 0.0), ud, ud.conj(), C64::new(dd, 0.0)]);
            DensityMatrix { data }
        }
        Subsystem::Pointer => {
            let n = psi.grid().len();
            let (u, d) = (psi.up(), psi.down());
            let data = DMatrix::from_fn(n, n, |j, k| (u[j] * u[k].conj() + d[j] * d[k].conj()) * dr);
            DensityMatrix { data }
        }
    }
}
