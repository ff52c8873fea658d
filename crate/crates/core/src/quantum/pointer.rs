//! Discretized pointer wavefunctions on a periodic R_A grid, and the joint
//! spin ⊗ pointer state.
//!
//! The pointer lives in the R_A representation. Its conjugate Q_A = −i d/dr is
//! diagonal after a discrete Fourier transform, so `exp(−i s Q_A)` translates
//! the packet by `+s`.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use super::spin::SpinState;
use super::QuantumError;

/// Uniform periodic grid `r_j = r_min + j·Δr`, `Δr = (r_max − r_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerGrid {
    r_min: f64,
    r_max: f64,
    n_points: usize,
}

impl PointerGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self, QuantumError> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min >= r_max {
            return Err(QuantumError::InvalidGrid(format!(
                "need r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(QuantumError::InvalidGrid(format!(
                "n_points must be a power of two ≥ 16, got {n_points}"
            )));
        }
        Ok(Self { r_min, r_max, n_points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dr(&self) -> f64 {
        (self.r_max - self.r_min) / self.n_points as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        self.r_min + j as f64 * self.dr()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let dr = self.dr();
        (0..self.n_points).map(move |j| self.r_min + j as f64 * dr)
    }

    /// Q_A eigenvalues in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = 2.0 * std::f64::consts::PI / (n as f64 * self.dr());
        (0..n)
            .map(|m| {
                let signed = if m < n / 2 { m as isize } else { m as isize - n as isize };
                signed as f64 * dk
            })
            .collect()
    }

    /// Grid index whose cell contains `r` (clamped to the grid).
    pub fn index_of(&self, r: f64) -> usize {
        let j = ((r - self.r_min) / self.dr()).round();
        j.clamp(0.0, (self.n_points - 1) as f64) as usize
    }
}

/// Forward/inverse FFT pair for one grid size. Forward is unnormalized, the
/// inverse divides by `n`.
pub(crate) struct Spectral {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    n: usize,
}

impl Spectral {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            n,
        }
    }

    pub(crate) fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    pub(crate) fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }
}

fn translate_in_place(grid: &PointerGrid, amps: &mut [C64], shift: f64) {
    let spectral = Spectral::new(grid.len());
    spectral.forward(amps);
    for (z, k) in amps.iter_mut().zip(grid.wavenumbers()) {
        *z *= C64::from_polar(1.0, -k * shift);
    }
    spectral.inverse(amps);
}

/// Normalized pointer wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerState {
    grid: PointerGrid,
    amps: Vec<C64>,
}

impl PointerState {
    /// Real Gaussian `ψ(r) ∝ exp(−(r−r₀)²/4ε²)`, so that `⟨(R−r₀)²⟩ = ε²`.
    pub fn gaussian(grid: PointerGrid, center: f64, width: f64) -> Result<Self, QuantumError> {
        Self::boosted_gaussian(grid, center, width, 0.0)
    }

    /// Gaussian carrying a mean Q_A value `mean_q`:
    /// `ψ(r) ∝ exp(−(r−r₀)²/4ε² + i·q₀·r)`.
    ///
    /// The R_A distribution is identical to [`PointerState::gaussian`]; only
    /// the Q_A distribution is displaced to be centered at `q₀`.
    pub fn boosted_gaussian(grid: PointerGrid, center: f64, width: f64, mean_q: f64) -> Result<Self, QuantumError> {
        if !(width > 0.0) || !width.is_finite() || !center.is_finite() || !mean_q.is_finite() {
            return Err(QuantumError::InvalidPointer(format!(
                "width must be positive and finite, got {width}"
            )));
        }
        let lo = center - 5.0 * width;
        let hi = center + 5.0 * width;
        if lo < grid.r_min() || hi > grid.r_max() {
            return Err(QuantumError::GridTooNarrow {
                support: (lo, hi),
                grid: (grid.r_min(), grid.r_max()),
            });
        }
        if width < grid.dr() {
            return Err(QuantumError::InvalidPointer(format!(
                "width {width} is below the grid spacing {}",
                grid.dr()
            )));
        }
        let amps: Vec<C64> = grid
            .positions()
            .map(|r| {
                let x = r - center;
                C64::from_polar((-x * x / (4.0 * width * width)).exp(), mean_q * r)
            })
            .collect();
        Self::from_amplitudes(grid, amps)
    }

    /// Normalizes arbitrary amplitudes on `grid`.
    pub fn from_amplitudes(grid: PointerGrid, mut amps: Vec<C64>) -> Result<Self, QuantumError> {
        if amps.len() != grid.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: grid.len(),
                found: amps.len(),
            });
        }
        let n = (amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(QuantumError::ZeroState);
        }
        amps.iter_mut().for_each(|z| *z /= n);
        Ok(Self { grid, amps })
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dr()
    }

    /// ⟨R_A⟩.
    pub fn center(&self) -> f64 {
        self.grid
            .positions()
            .zip(&self.amps)
            .map(|(r, z)| r * z.norm_sqr())
            .sum::<f64>()
            * self.grid.dr()
    }

    /// ⟨(R_A − ⟨R_A⟩)²⟩.
    pub fn variance(&self) -> f64 {
        let c = self.center();
        self.grid
            .positions()
            .zip(&self.amps)
            .map(|(r, z)| (r - c).powi(2) * z.norm_sqr())
            .sum::<f64>()
            * self.grid.dr()
    }

    /// Standard deviation of R_A; equals ε for a Gaussian pointer.
    pub fn width(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `exp(−i·s·Q_A)|φ⟩`, i.e. the packet moved by `+s`.
    pub fn translated(&self, shift: f64) -> Self {
        let mut amps = self.amps.clone();
        translate_in_place(&self.grid, &mut amps, shift);
        Self { grid: self.grid, amps }
    }
}

/// Joint spin ⊗ pointer amplitude `ψ_σ(r_k)`, σ ∈ {+z, −z}.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    grid: PointerGrid,
    up: Vec<C64>,
    down: Vec<C64>,
}

impl CompositeState {
    /// `|s⟩ ⊗ |φ⟩`.
    pub fn tensor(spin: &SpinState, pointer: &PointerState) -> Self {
        let [a, b] = spin.amplitudes();
        Self {
            grid: pointer.grid,
            up: pointer.amps.iter().map(|z| a * z).collect(),
            down: pointer.amps.iter().map(|z| b * z).collect(),
        }
    }

    /// Builds a state from both spin components without renormalizing.
    pub fn from_components(grid: PointerGrid, up: Vec<C64>, down: Vec<C64>) -> Result<Self, QuantumError> {
        for v in [&up, &down] {
            if v.len() != grid.len() {
                return Err(QuantumError::DimensionMismatch {
                    expected: grid.len(),
                    found: v.len(),
                });
            }
        }
        Ok(Self { grid, up, down })
    }

    /// `Σ_i c_i |s_i⟩ ⊗ |φ_i⟩` for spin states and (already normalized)
    /// pointer states sharing one grid.
    pub fn superpose(terms: &[(C64, SpinState, PointerState)]) -> Result<Self, QuantumError> {
        let grid = terms.first().ok_or(QuantumError::ZeroState)?.2.grid;
        let mut up = vec![C64::new(0.0, 0.0); grid.len()];
        let mut down = up.clone();
        for (c, s, p) in terms {
            if p.grid != grid {
                return Err(QuantumError::GridMismatch);
            }
            let [a, b] = s.amplitudes();
            for ((u, d), z) in up.iter_mut().zip(down.iter_mut()).zip(&p.amps) {
                *u += c * a * z;
                *d += c * b * z;
            }
        }
        Ok(Self { grid, up, down })
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }

    pub fn up(&self) -> &[C64] {
        &self.up
    }

    pub fn down(&self) -> &[C64] {
        &self.down
    }

    pub(crate) fn components_mut(&mut self) -> (&mut Vec<C64>, &mut Vec<C64>) {
        (&mut self.up, &mut self.down)
    }

    /// Σ_k (|ψ₊|² + |ψ₋|²)·Δr.
    pub fn norm_sqr(&self) -> f64 {
        self.marginal_iter().sum::<f64>() * self.grid.dr()
    }

    fn marginal_iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.up.iter().zip(&self.down).map(|(u, d)| u.norm_sqr() + d.norm_sqr())
    }

    /// Pointer probability per cell, `(|ψ₊|² + |ψ₋|²)·Δr`.
    pub fn marginal(&self) -> Vec<f64> {
        let dr = self.grid.dr();
        self.marginal_iter().map(|p| p * dr).collect()
    }

    /// ⟨R_A⟩ over both spin components.
    pub fn pointer_center(&self) -> f64 {
        self.grid
            .positions()
            .zip(self.marginal_iter())
            .map(|(r, p)| r * p)
            .sum::<f64>()
            * self.grid.dr()
    }

    /// Probability that the pointer lies in `[lo, hi]`.
    pub fn window_weight(&self, lo: f64, hi: f64) -> f64 {
        self.grid
            .positions()
            .zip(self.marginal_iter())
            .filter(|(r, _)| *r >= lo && *r <= hi)
            .map(|(_, p)| p)
            .sum::<f64>()
            * self.grid.dr()
    }

    /// Unnormalized spin amplitudes at grid cell `j`.
    pub fn spin_at(&self, j: usize) -> [C64; 2] {
        [self.up[j], self.down[j]]
    }

    /// ⟨self|other⟩ with the Δr measure.
    pub fn inner(&self, other: &CompositeState) -> C64 {
        let s: C64 = self
            .up
            .iter()
            .zip(&other.up)
            .chain(self.down.iter().zip(&other.down))
            .map(|(a, b)| a.conj() * b)
            .sum();
        s * self.grid.dr()
    }

    /// L2 distance ‖self − other‖.
    pub fn distance(&self, other: &CompositeState) -> f64 {
        let s: f64 = self
            .up
            .iter()
            .zip(&other.up)
            .chain(self.down.iter().zip(&other.down))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.grid.dr()).sqrt()
    }

    /// Applies `exp(−i s Q_A)` to both components.
    pub fn translated(&self, shift: f64) -> Self {
        let mut out = self.clone();
        translate_in_place(&self.grid, &mut out.up, shift);
        translate_in_place(&self.grid, &mut out.down, shift);
        out
    }
}
