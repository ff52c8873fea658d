//! Spin-1/2 states and 2×2 Hermitian operators.

use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use super::QuantumError;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Normalized spin-1/2 state in the σ_z basis, `(⟨+z|s⟩, ⟨−z|s⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    amps: [C64; 2],
}

impl SpinState {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(up: C64, down: C64) -> Result<Self, QuantumError> {
        let n = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(QuantumError::ZeroState);
        }
        Ok(Self {
            amps: [up / n, down / n],
        })
    }

    /// +1 eigenstate of σ·n for the unit vector with polar angle `theta` and
    /// azimuth `phi`: `(cos θ/2, e^{iφ} sin θ/2)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            amps: [C64::new(c, 0.0), C64::from_polar(s, phi)],
        }
    }

    /// +1 eigenstate of σ·n for an arbitrary (non-zero) direction.
    pub fn along(n: [f64; 3]) -> Result<Self, QuantumError> {
        let len = norm3(n);
        if len == 0.0 || !len.is_finite() {
            return Err(QuantumError::ZeroVector);
        }
        let theta = (n[2] / len).clamp(-1.0, 1.0).acos();
        let phi = n[1].atan2(n[0]);
        Ok(Self::from_angles(theta, phi))
    }

    pub fn up() -> Self {
        Self::from_angles(0.0, 0.0)
    }

    pub fn down() -> Self {
        Self {
            amps: [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amps
    }

    pub fn up_amp(&self) -> C64 {
        self.amps[0]
    }

    pub fn down_amp(&self) -> C64 {
        self.amps[1]
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &SpinState) -> C64 {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }

    /// |⟨self|other⟩|²
    pub fn overlap(&self, other: &SpinState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// The state orthogonal to `self`, `(−b*, a*)`.
    pub fn orthogonal(&self) -> Self {
        Self {
            amps: [-self.amps[1].conj(), self.amps[0].conj()],
        }
    }

    /// Bloch vector ⟨σ⟩.
    pub fn bloch(&self) -> [f64; 3] {
        let [a, b] = self.amps;
        let ab = a.conj() * b;
        [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps[0].norm_sqr() + self.amps[1].norm_sqr()
    }

    pub(crate) fn from_raw_unchecked(amps: [C64; 2]) -> Self {
        Self { amps }
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.amps;
        write!(f, "({:.6}{:+.6}i)|+z⟩ + ({:.6}{:+.6}i)|−z⟩", a.re, a.im, b.re, b.im)
    }
}

/// Hermitian 2×2 operator on the spin, stored together with its Pauli
/// decomposition `h₀·1 + h·σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    matrix: Matrix2<C64>,
    label: String,
}

impl SpinOperator {
    /// Validates Hermiticity to `tol` and symmetrizes the stored matrix.
    pub fn from_matrix(m: Matrix2<C64>, label: impl Into<String>, tol: f64) -> Result<Self, QuantumError> {
        let dev = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(dev <= tol) {
            return Err(QuantumError::NotHermitian { deviation: dev });
        }
        let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self {
            matrix: sym,
            label: label.into(),
        })
    }

    /// `h₀·1 + hx·σx + hy·σy + hz·σz`.
    pub fn from_pauli(h0: f64, h: [f64; 3], label: impl Into<String>) -> Self {
        let [hx, hy, hz] = h;
        let m = Matrix2::new(
            C64::new(h0 + hz, 0.0),
            C64::new(hx, -hy),
            C64::new(hx, hy),
            C64::new(h0 - hz, 0.0),
        );
        Self {
            matrix: m,
            label: label.into(),
        }
    }

    /// σ·n for a direction `n`; the direction is normalized so the
    /// eigenvalues are exactly ±1.
    pub fn sigma_dot(n: [f64; 3]) -> Result<Self, QuantumError> {
        let len = norm3(n);
        if len == 0.0 || !len.is_finite() {
            return Err(QuantumError::ZeroVector);
        }
        let u = [n[0] / len, n[1] / len, n[2] / len];
        Ok(Self::from_pauli(
            0.0,
            u,
            format!("σ·({:.4},{:.4},{:.4})", u[0], u[1], u[2]),
        ))
    }

    pub fn sigma_x() -> Self {
        Self::from_pauli(0.0, [1.0, 0.0, 0.0], "σx")
    }

    pub fn sigma_y() -> Self {
        Self::from_pauli(0.0, [0.0, 1.0, 0.0], "σy")
    }

    pub fn sigma_z() -> Self {
        Self::from_pauli(0.0, [0.0, 0.0, 1.0], "σz")
    }

    pub fn zero() -> Self {
        Self::from_pauli(0.0, [0.0; 3], "0")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let (h0, h) = self.pauli();
        Self::from_pauli(
            factor * h0,
            [factor * h[0], factor * h[1], factor * h[2]],
            format!("{factor}·{}", self.label),
        )
    }

    /// Sum `self + other` (both Hermitian).
    pub fn plus(&self, other: &SpinOperator) -> Self {
        let (a0, a) = self.pauli();
        let (b0, b) = other.pauli();
        Self::from_pauli(
            a0 + b0,
            [a[0] + b[0], a[1] + b[1], a[2] + b[2]],
            format!("{} + {}", self.label, other.label),
        )
    }

    /// `(h₀, h)` with `self = h₀·1 + h·σ`.
    pub fn pauli(&self) -> (f64, [f64; 3]) {
        let m = &self.matrix;
        let h0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let hz = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
        let hx = m[(1, 0)].re;
        let hy = m[(1, 0)].im;
        (h0, [hx, hy, hz])
    }

    /// Eigenvalues in ascending order with their eigenstates.
    pub fn eigen(&self) -> ([f64; 2], [SpinState; 2]) {
        let (h0, h) = self.pauli();
        let len = norm3(h);
        if len == 0.0 {
            return ([h0, h0], [SpinState::up(), SpinState::down()]);
        }
        let upper = SpinState::along(h).expect("non-zero field");
        ([h0 - len, h0 + len], [upper.orthogonal(), upper])
    }

    /// Difference between the two eigenvalues, `2|h|`.
    pub fn gap(&self) -> f64 {
        2.0 * norm3(self.pauli().1)
    }

    /// ⟨s|A|s⟩.
    pub fn expectation(&self, s: &SpinState) -> f64 {
        let [a, b] = s.amplitudes();
        let m = &self.matrix;
        let ma = m[(0, 0)] * a + m[(0, 1)] * b;
        let mb = m[(1, 0)] * a + m[(1, 1)] * b;
        (a.conj() * ma + b.conj() * mb).re
    }

    /// Max-entry norm of the commutator `[self, other]`.
    pub fn commutator_norm(&self, other: &SpinOperator) -> f64 {
        let c = self.matrix * other.matrix - other.matrix * self.matrix;
        c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `exp(−i·t·A)`.
    pub fn evolution(&self, t: f64) -> Unitary2 {
        let (h0, h) = self.pauli();
        Unitary2::exp_pauli(t * h0, [t * h[0], t * h[1], t * h[2]])
    }

    pub fn apply(&self, s: &SpinState) -> [C64; 2] {
        let [a, b] = s.amplitudes();
        let m = &self.matrix;
        [m[(0, 0)] * a + m[(0, 1)] * b, m[(1, 0)] * a + m[(1, 1)] * b]
    }
}

impl fmt::Display for SpinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Dense 2×2 complex matrix used as a propagator factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(pub [[C64; 2]; 2]);

impl Unitary2 {
    pub fn identity() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self([[o, z], [z, o]])
    }

    /// `exp(−i(a₀ + a·σ))`.
    pub fn exp_pauli(a0: f64, a: [f64; 3]) -> Self {
        let len = norm3(a);
        let phase = C64::from_polar(1.0, -a0);
        let (s, c) = len.sin_cos();
        let (ux, uy, uz) = if len > 0.0 {
            (a[0] / len, a[1] / len, a[2] / len)
        } else {
            (0.0, 0.0, 0.0)
        };
        // cos|a| − i sin|a| â·σ
        let m00 = C64::new(c, -s * uz);
        let m11 = C64::new(c, s * uz);
        let m01 = -I * s * C64::new(ux, -uy);
        let m10 = -I * s * C64::new(ux, uy);
        Self([[phase * m00, phase * m01], [phase * m10, phase * m11]])
    }

    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Matrix product `self · rhs`.
    pub fn then_after(&self, rhs: &Unitary2) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }

    pub fn scale(&self, z: C64) -> Self {
        let m = &self.0;
        Self([[m[0][0] * z, m[0][1] * z], [m[1][0] * z, m[1][1] * z]])
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn angles_give_expected_amplitudes() {
        let s = SpinState::from_angles(0.0, 0.0);
        assert_abs_diff_eq!(s.up_amp().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.down_amp().norm(), 0.0, epsilon = 1e-15);

        // −z up to a global phase
        let s = SpinState::from_angles(PI, 0.0);
        assert_abs_diff_eq!(s.overlap(&SpinState::down()), 1.0, epsilon = 1e-15);

        let s = SpinState::from_angles(PI / 2.0, 0.0);
        assert_abs_diff_eq!(s.up_amp().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.down_amp().re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let up = SpinState::up();
        assert_abs_diff_eq!(SpinOperator::sigma_z().expectation(&up), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(SpinOperator::sigma_x().expectation(&up), 0.0, epsilon = 1e-15);
        let t = PI / 3.0;
        let n = SpinOperator::sigma_dot([t.sin(), 0.0, t.cos()]).unwrap();
        assert_abs_diff_eq!(n.expectation(&up), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn eigenstate_of_tilted_axis_gives_dot_product() {
        // ⟨σ·n⟩ in the +1 eigenstate of σ·ñ equals n·ñ
        let nt = [0.3, -0.4, 0.5];
        let n = [-0.2, 0.9, 0.1];
        let s = SpinState::along(nt).unwrap();
        let op = SpinOperator::sigma_dot(n).unwrap();
        let expect = dot3(n, nt) / (norm3(n) * norm3(nt));
        assert_abs_diff_eq!(op.expectation(&s), expect, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix2::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        );
        assert!(matches!(
            SpinOperator::from_matrix(m, "bad", 1e-12),
            Err(QuantumError::NotHermitian { .. })
        ));
    }

    #[test]
    fn evolution_matches_eigen_phases() {
        let op = SpinOperator::from_pauli(0.3, [0.2, -0.7, 0.4], "h");
        let (vals, vecs) = op.eigen();
        let u = op.evolution(1.7);
        for (e, v) in vals.iter().zip(vecs.iter()) {
            let out = u.apply(v.amplitudes());
            let want = C64::from_polar(1.0, -1.7 * e);
            assert_abs_diff_eq!((out[0] - want * v.up_amp()).norm(), 0.0, epsilon = 1e-13);
            assert_abs_diff_eq!((out[1] - want * v.down_amp()).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let s = SpinState::from_angles(1.1, 2.3);
        assert_abs_diff_eq!(s.inner(&s.orthogonal()).norm(), 0.0, epsilon = 1e-15);
    }
}
