//! Thin FFT layer over `rustfft` for the 1D and 2D grids.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! number of points, so `inverse(forward(f)) == f`.

use crate::exec;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

#[derive(Clone)]
pub struct Fft1 {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft1 {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft1 {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len);
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len);
        self.inverse.process(data);
        let s = 1.0 / self.len as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }
}

/// Row-major 2D transform; element `(i, j)` lives at `i * ny + j`.
#[derive(Clone)]
pub struct Fft2 {
    nx: usize,
    ny: usize,
    along_x: Fft1,
    along_y: Fft1,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        Fft2 {
            nx,
            ny,
            along_x: Fft1::new(nx),
            along_y: Fft1::new(ny),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.nx * self.ny);
        let ny_plan = &self.along_y;
        exec::for_each_row(data, self.ny, |_, row| {
            if inverse {
                ny_plan.inverse(row)
            } else {
                ny_plan.forward(row)
            }
        });
        let mut t = transpose(data, self.nx, self.ny);
        let nx_plan = &self.along_x;
        exec::for_each_row(&mut t, self.nx, |_, row| {
            if inverse {
                nx_plan.inverse(row)
            } else {
                nx_plan.forward(row)
            }
        });
        let back = transpose(&t, self.ny, self.nx);
        data.copy_from_slice(&back);
    }
}

/// Transpose a `rows × cols` row-major array.
fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    exec::for_each_row(&mut out, rows, |j, out_row| {
        for (i, v) in out_row.iter_mut().enumerate() {
            *v = data[i * cols + j];
        }
    });
    out
}
