use crate::error::{config, Result};
use std::f64::consts::PI;

/// One uniform periodic axis centred on the origin: `x_i = -extent/2 + i·dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub points: usize,
    pub extent: f64,
}

impl Axis {
    pub fn new(points: usize, extent: f64) -> Result<Self> {
        if points < 2 || !points.is_power_of_two() {
            return config(format!("grid points must be a power of two, got {points}"));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return config("grid extent must be positive");
        }
        Ok(Axis { points, extent })
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.points as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.extent + i as f64 * self.spacing()
    }

    /// Wavenumber of FFT bin `m` (standard ordering, negative half last).
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n = self.points as isize;
        let m = m as isize;
        let signed = if m < n / 2 { m } else { m - n };
        2.0 * PI * signed as f64 / self.extent
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.extent
    }

    /// Nyquist wavenumber π/dx.
    pub fn k_max(&self) -> f64 {
        PI / self.spacing()
    }

    /// Smallest power-of-two axis with `extent >= min_extent` and
    /// `k_max >= min_kmax`; the extent is then set to exactly `min_extent`.
    pub fn sized(min_extent: f64, min_kmax: f64) -> Result<Self> {
        let need = (min_kmax * min_extent / PI).ceil().max(2.0) as usize;
        let points = need.next_power_of_two();
        if points > 1 << 24 {
            return config(format!("required grid of {points} points per axis is too large"));
        }
        Axis::new(points, min_extent)
    }
}

/// A 1D or 2D uniform grid (square cells in 2D). 2D data are stored row-major
/// with index `i * ny + j`, `i` along x and `j` along y.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new_1d(points: usize, extent: f64) -> Result<Self> {
        Ok(Grid {
            axes: vec![Axis::new(points, extent)?],
        })
    }

    pub fn new_2d(points: usize, extent: f64) -> Result<Self> {
        let a = Axis::new(points, extent)?;
        Ok(Grid { axes: vec![a, a] })
    }

    pub fn from_axes(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return config("grid dimension must be 1 or 2");
        }
        Ok(Grid { axes })
    }

    /// 1D grid able to hold a packet of width `w` displaced by up to `reach`
    /// with spreading width `spread`: cutoff ≥ 8/w, padding 8·spread.
    pub fn sized_1d(w: f64, reach: f64, spread: f64) -> Result<Self> {
        let extent = 2.0 * (reach + 8.0 * spread.max(w));
        Grid::from_axes(vec![Axis::sized(extent, 8.0 / w)?])
    }

    /// 2D grid for a ring of radius `r_so` and packet width `w`. The cutoff
    /// is 12/w because the 2D Gaussian spectrum falls off as e^{-k²w²/4}.
    pub fn sized_2d(w: f64, r_so: f64) -> Result<Self> {
        let extent = 2.0 * (r_so + 8.0 * w);
        let a = Axis::sized(extent, 12.0 / w)?;
        Grid::from_axes(vec![a, a])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, d: usize) -> &Axis {
        &self.axes[d]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume element dx (1D) or dx·dy (2D).
    pub fn cell(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    /// Position of flat index `idx`: `[x, 0]` in 1D, `[x, y]` in 2D.
    pub fn position(&self, idx: usize) -> [f64; 2] {
        match self.axes.as_slice() {
            [a] => [a.coord(idx), 0.0],
            [ax, ay] => [ax.coord(idx / ay.points), ay.coord(idx % ay.points)],
            _ => unreachable!(),
        }
    }

    /// Wavevector of flat FFT index `idx`.
    pub fn wavevector(&self, idx: usize) -> [f64; 2] {
        match self.axes.as_slice() {
            [a] => [a.wavenumber(idx), 0.0],
            [ax, ay] => [ax.wavenumber(idx / ay.points), ay.wavenumber(idx % ay.points)],
            _ => unreachable!(),
        }
    }

    /// Flat index of the grid node `(i, j)` (use `j = 0` in 1D).
    pub fn index(&self, i: usize, j: usize) -> usize {
        match self.axes.as_slice() {
            [_] => i,
            [_, ay] => i * ay.points + j,
            _ => unreachable!(),
        }
    }

    pub fn min_extent(&self) -> f64 {
        self.axes.iter().map(|a| a.extent).fold(f64::INFINITY, f64::min)
    }

    pub fn min_k_max(&self) -> f64 {
        self.axes.iter().map(Axis::k_max).fold(f64::INFINITY, f64::min)
    }

    /// Check the sizing rule for a packet of width `w` that may travel up to
    /// `reach` from the origin: k_max ≥ 8/w and extent ≥ 2(reach + 8w).
    pub fn check_for(&self, w: f64, reach: f64) -> Result<()> {
        if self.min_k_max() < 8.0 / w * (1.0 - 1e-12) {
            return config(format!(
                "grid cutoff k_max = {:.4} is below 8/w = {:.4}",
                self.min_k_max(),
                8.0 / w
            ));
        }
        let need = 2.0 * (reach + 8.0 * w);
        if self.min_extent() < need * (1.0 - 1e-12) {
            return config(format!(
                "grid extent {:.4} is smaller than the required {:.4}",
                self.min_extent(),
                need
            ));
        }
        Ok(())
    }
}
