//! Lie–Trotter product formulas and Feynman-checkerboard path sums.
//!
//! Slicing the pulse into L steps of length ε lets the spin take a definite
//! eigenvalue in each slice. Every such path displaces the packet by the
//! time-averaged spin times the coupling times T. These routines enumerate
//! the paths and compare the resulting product propagators with the exact
//! ones.

mod paths1d;
mod product2d;

pub use paths1d::{
    enumerate_paths_1d, path_sum_sectors, split_evolve_1d, transfer_sectors_1d,
    trotter_convergence_1d, ConvergenceRow, PathSample, Sectors1D, MAX_ENUMERATION_STEPS,
};
pub use product2d::{trotter_step_product_2d, SplitOrder};

use crate::error::{Error, Result};

/// Combined label of (m_x, m_y) for one slice:
/// (1, 1) → 2, (1, −1) → 1, (−1, 1) → −1, (−1, −1) → −2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MEncoding(i8);

impl MEncoding {
    pub fn value(self) -> i8 {
        self.0
    }

    pub fn from_value(v: i8) -> Result<Self> {
        match v {
            -2 | -1 | 1 | 2 => Ok(MEncoding(v)),
            _ => Err(Error::Domain(format!("M must be one of -2, -1, 1, 2, got {v}"))),
        }
    }
}

fn check_unit(m: i8, what: &str) -> Result<()> {
    if m == 1 || m == -1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be +1 or -1, got {m}")))
    }
}

pub fn encode_m(m_x: i8, m_y: i8) -> Result<MEncoding> {
    check_unit(m_x, "m_x")?;
    check_unit(m_y, "m_y")?;
    Ok(MEncoding(if m_x == m_y { 2 * m_x } else { m_x }))
}

/// m_x = sign M, m_y = (−1)^M sign M.
pub fn decode_m(m: MEncoding) -> (i8, i8) {
    let s = m.0.signum();
    let parity = if m.0 % 2 == 0 { 1 } else { -1 };
    (s, parity * s)
}

/// One checkerboard path: per-slice spin eigenvalues. 1D paths keep the
/// σ_z values in `steps_x` and leave `steps_y` empty.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub steps_x: Vec<i8>,
    pub steps_y: Vec<i8>,
    pub epsilon: f64,
}

/// Time averages of the spin along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathAverage {
    OneD { sigma_z: f64 },
    TwoD { sigma_x: f64, sigma_y: f64 },
}

impl PathRecord {
    pub fn new_1d(steps: Vec<i8>, epsilon: f64) -> Result<Self> {
        Self::new_2d(steps, Vec::new(), epsilon)
    }

    pub fn new_2d(steps_x: Vec<i8>, steps_y: Vec<i8>, epsilon: f64) -> Result<Self> {
        if steps_x.is_empty() {
            return Err(Error::Domain("a path needs at least one step".into()));
        }
        if !steps_y.is_empty() && steps_y.len() != steps_x.len() {
            return Err(Error::Domain("x and y step lists differ in length".into()));
        }
        for &m in steps_x.iter().chain(&steps_y) {
            check_unit(m, "step")?;
        }
        if !(epsilon > 0.0) {
            return Err(Error::Domain("epsilon must be positive".into()));
        }
        Ok(PathRecord {
            steps_x,
            steps_y,
            epsilon,
        })
    }

    /// 2D path from its M labels.
    pub fn from_encoded(labels: &[MEncoding], epsilon: f64) -> Result<Self> {
        let (sx, sy) = labels.iter().map(|&m| decode_m(m)).unzip();
        Self::new_2d(sx, sy, epsilon)
    }

    pub fn encoded(&self) -> Result<Vec<MEncoding>> {
        self.steps_x
            .iter()
            .zip(&self.steps_y)
            .map(|(&x, &y)| encode_m(x, y))
            .collect()
    }

    pub fn steps(&self) -> usize {
        self.steps_x.len()
    }

    pub fn is_2d(&self) -> bool {
        !self.steps_y.is_empty()
    }

    /// Δn_x and Δn_y (Δn_y = 0 for 1D paths).
    pub fn delta_n(&self) -> (i64, i64) {
        let sum = |v: &[i8]| v.iter().map(|&m| i64::from(m)).sum::<i64>();
        (sum(&self.steps_x), sum(&self.steps_y))
    }
}

/// Δn_i / L for each component.
pub fn path_time_average(path: &PathRecord) -> PathAverage {
    let l = path.steps() as f64;
    let (nx, ny) = path.delta_n();
    if path.is_2d() {
        PathAverage::TwoD {
            sigma_x: nx as f64 / l,
            sigma_y: ny as f64 / l,
        }
    } else {
        PathAverage::OneD {
            sigma_z: nx as f64 / l,
        }
    }
}
