use super::{Grid, MeasurementSetup, SpinState};
use crate::error::{config, Error, Result};
use crate::exec;
use crate::fft::{Fft1, Fft2};
use crate::mat2::{Mat2, Spinor};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Two-component wavefunction sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: Grid,
    comps: [Vec<Complex64>; 2],
}

impl SpinorField {
    pub fn new(grid: Grid, up: Vec<Complex64>, down: Vec<Complex64>) -> Result<Self> {
        if up.len() != grid.len() || down.len() != grid.len() {
            return config("component length does not match the grid");
        }
        Ok(SpinorField {
            grid,
            comps: [up, down],
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn value(&self, idx: usize) -> Spinor {
        [self.comps[0][idx], self.comps[1][idx]]
    }

    /// Ψ†Ψ at each node.
    pub fn density(&self) -> Vec<f64> {
        exec::map_range(self.grid.len(), |i| {
            self.comps[0][i].norm_sqr() + self.comps[1][i].norm_sqr()
        })
    }

    /// ∫ Ψ†Ψ.
    pub fn norm(&self) -> f64 {
        exec::sum_range(self.grid.len(), |i| {
            self.comps[0][i].norm_sqr() + self.comps[1][i].norm_sqr()
        }) * self.grid.cell()
    }

    /// Largest pointwise |Ψ_c − Φ_c| over both components.
    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        let n = self.grid.len();
        exec::map_range(n.div_ceil(exec::CHUNK), |c| {
            let lo = c * exec::CHUNK;
            let hi = (lo + exec::CHUNK).min(n);
            (lo..hi)
                .map(|i| {
                    (self.comps[0][i] - other.comps[0][i])
                        .norm()
                        .max((self.comps[1][i] - other.comps[1][i]).norm())
                })
                .fold(0.0, f64::max)
        })
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// L² distance (∫ |Ψ − Φ|²)^{1/2}.
    pub fn l2_distance(&self, other: &SpinorField) -> f64 {
        (exec::sum_range(self.grid.len(), |i| {
            (self.comps[0][i] - other.comps[0][i]).norm_sqr()
                + (self.comps[1][i] - other.comps[1][i]).norm_sqr()
        }) * self.grid.cell())
        .sqrt()
    }

    /// Continuous Fourier amplitudes ψ(k) = ∫ Ψ(r) e^{-ik·r} d^D r at the FFT bins.
    pub fn to_momentum(&self) -> [Vec<Complex64>; 2] {
        let mut out = self.comps.clone();
        for c in out.iter_mut() {
            self.forward(c);
        }
        let cell = self.grid.cell();
        let grid = &self.grid;
        let origin: Vec<f64> = grid.axes().iter().map(|a| a.coord(0)).collect();
        for c in out.iter_mut() {
            exec::for_each_indexed(c, |idx, v| {
                let k = grid.wavevector(idx);
                let phase: f64 = k.iter().zip(&origin).map(|(k, x0)| -k * x0).sum();
                *v *= Complex64::from_polar(cell, phase);
            });
        }
        out
    }

    /// Apply a momentum-diagonal 2×2 operator `op(k)` to the field.
    ///
    /// The field is transformed to the FFT bins, each mode is multiplied by
    /// `op(k)`, and the result is transformed back. The origin phase of the
    /// grid commutes with `op` and cancels.
    pub fn apply_mode_operator<F>(&self, op: F) -> SpinorField
    where
        F: Fn([f64; 2]) -> Mat2 + Sync + Send,
    {
        let mut a = self.comps[0].clone();
        let mut b = self.comps[1].clone();
        self.forward(&mut a);
        self.forward(&mut b);
        let grid = &self.grid;
        let mut pairs: Vec<Spinor> = a.into_iter().zip(b).map(|(x, y)| [x, y]).collect();
        exec::for_each_indexed(&mut pairs, |idx, v| {
            *v = op(grid.wavevector(idx)).apply(v);
        });
        let (mut a, mut b): (Vec<_>, Vec<_>) = pairs.into_iter().map(|[x, y]| (x, y)).unzip();
        self.inverse(&mut a);
        self.inverse(&mut b);
        SpinorField {
            grid: self.grid.clone(),
            comps: [a, b],
        }
    }

    fn forward(&self, data: &mut [Complex64]) {
        match self.grid.dim() {
            1 => Fft1::new(self.grid.len()).forward(data),
            _ => Fft2::new(self.grid.axis(0).points, self.grid.axis(1).points).forward(data),
        }
    }

    fn inverse(&self, data: &mut [Complex64]) {
        match self.grid.dim() {
            1 => Fft1::new(self.grid.len()).inverse(data),
            _ => Fft2::new(self.grid.axis(0).points, self.grid.axis(1).points).inverse(data),
        }
    }
}

/// Normalized Gaussian envelope of width `w` at position `r` in `dim` dimensions.
///
/// 1D: π^{-1/4} w^{-1/2} e^{-x²/2w²}; 2D: √2/(√π w) e^{-r²/w²}.
pub fn gaussian_envelope(dim: usize, w: f64, r: [f64; 2]) -> f64 {
    if dim == 1 {
        PI.powf(-0.25) / w.sqrt() * (-r[0] * r[0] / (2.0 * w * w)).exp()
    } else {
        let r2 = r[0] * r[0] + r[1] * r[1];
        2f64.sqrt() / (PI.sqrt() * w) * (-r2 / (w * w)).exp()
    }
}

/// ψ₀(r)·ξ on the grid.
pub fn make_gaussian_state(
    setup: &MeasurementSetup,
    spin: &SpinState,
    grid: &Grid,
) -> Result<SpinorField> {
    let w = setup.w;
    if grid.min_extent() < 8.0 * w {
        return config(format!(
            "grid extent {:.4} is too small for a packet of width {w} (need at least 8w)",
            grid.min_extent()
        ));
    }
    if grid.min_k_max() < 8.0 / w * (1.0 - 1e-12) {
        return config(format!(
            "grid cutoff {:.4} does not resolve a packet of width {w} (need 8/w)",
            grid.min_k_max()
        ));
    }
    let xi = spin.spinor();
    let dim = grid.dim();
    let env = exec::map_range(grid.len(), |i| gaussian_envelope(dim, w, grid.position(i)));
    let up = env.iter().map(|&e| xi[0] * e).collect();
    let down = env.iter().map(|&e| xi[1] * e).collect();
    let field = SpinorField::new(grid.clone(), up, down)?;
    let n = field.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "discretized Gaussian has norm {n:.3e} (grid too coarse)"
        )));
    }
    Ok(field)
}
