use super::{MeasurementSetup, SpinorField};
use crate::error::{Error, Result};
use crate::exec;
use num_complex::Complex64;

/// Reduced spin density matrix ρ = ∫ Ψ Ψ† d^D r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

impl DensityMatrix2 {
    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    /// Bloch vector (tr ρσ_x, tr ρσ_y, tr ρσ_z).
    pub fn bloch(&self) -> [f64; 3] {
        [
            2.0 * self.rho12.re,
            -2.0 * self.rho12.im,
            self.rho11 - self.rho22,
        ]
    }

    /// tr ρ² = Σ_ij |ρ_ij|².
    pub fn purity(&self) -> f64 {
        self.rho11 * self.rho11 + self.rho22 * self.rho22 + 2.0 * self.rho12.norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half = 0.5 * self.trace();
        let d = 0.5 * (self.rho11 - self.rho22);
        let r = (d * d + self.rho12.norm_sqr()).sqrt();
        [half - r, half + r]
    }

    /// Trace, positivity and purity-range checks.
    pub fn check(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("density matrix trace {tr}")));
        }
        let ev = self.eigenvalues();
        if ev[0] < -1e-12 {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", ev[0])));
        }
        let p = self.purity();
        if !(0.5 - 1e-10..=1.0 + 1e-10).contains(&p) {
            return Err(Error::InvalidState(format!("purity {p} outside [1/2, 1]")));
        }
        Ok(())
    }
}

pub fn density_matrix(field: &SpinorField) -> DensityMatrix2 {
    let a = field.component(0);
    let b = field.component(1);
    let cell = field.grid().cell();
    let [r11, r22, re, im] = exec::sum_range_vec::<4, _>(a.len(), |i| {
        let c = a[i] * b[i].conj();
        [a[i].norm_sqr(), b[i].norm_sqr(), c.re, c.im]
    });
    DensityMatrix2 {
        rho11: r11 * cell,
        rho22: r22 * cell,
        rho12: Complex64::new(re, im) * cell,
    }
}

/// Coordinate and spin observables of a state at one instant.
///
/// `width` is w(t) = √2·√(⟨x²⟩ − ⟨x⟩²), so a fresh Gaussian of width w
/// reports w. In 2D the coordinate entries refer to the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub mean_x: f64,
    pub width: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub sigma_z: f64,
    pub sigma_parallel: f64,
    pub sigma_perp: f64,
    pub purity: f64,
}

pub fn observables_of(field: &SpinorField, setup: &MeasurementSetup) -> Result<ObservableSet> {
    let n = field.norm();
    if (n - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidState(format!("field norm {n} is not 1")));
    }
    let grid = field.grid();
    let a = field.component(0);
    let b = field.component(1);
    let [m1, m2] = exec::sum_range_vec::<2, _>(grid.len(), |i| {
        let x = grid.position(i)[0];
        let rho = a[i].norm_sqr() + b[i].norm_sqr();
        [x * rho, x * x * rho]
    });
    let cell = grid.cell();
    let (mean_x, mean_x2) = (m1 * cell, m2 * cell);
    let var = (mean_x2 - mean_x * mean_x).max(0.0);
    let rho = density_matrix(field);
    let [sx, sy, sz] = rho.bloch();
    let (st, ct) = setup.theta.sin_cos();
    Ok(ObservableSet {
        mean_x,
        width: 2f64.sqrt() * var.sqrt(),
        sigma_x: sx,
        sigma_y: sy,
        sigma_z: sz,
        sigma_parallel: sz * ct + sx * st,
        sigma_perp: sz * st - sx * ct,
        purity: rho.purity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmcore::{make_gaussian_state, Grid, SpinState};
    use std::f64::consts::PI;

    fn initial(spin: SpinState, theta: f64) -> (SpinorField, MeasurementSetup) {
        let s = MeasurementSetup::zeeman_units(theta, 1.0, 0.0).unwrap();
        let g = Grid::new_1d(256, 40.0).unwrap();
        (make_gaussian_state(&s, &spin, &g).unwrap(), s)
    }

    #[test]
    fn initial_gaussian_moments() {
        let (f, s) = initial(SpinState::new(0.7, 0.3), PI / 4.0);
        let o = observables_of(&f, &s).unwrap();
        assert!(o.mean_x.abs() < 1e-8);
        assert!((o.width - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spin_up_expectations() {
        let (f, s) = initial(SpinState::UP, PI / 4.0);
        let o = observables_of(&f, &s).unwrap();
        assert!((o.sigma_z - 1.0).abs() < 1e-10);
        assert!(o.sigma_x.abs() < 1e-14 && o.sigma_y.abs() < 1e-14);
        assert!((o.purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sigma_x_eigenstate_projections() {
        let theta = 0.9;
        let (f, s) = initial(SpinState::new(PI / 2.0, 0.0), theta);
        let o = observables_of(&f, &s).unwrap();
        assert!((o.sigma_x - 1.0).abs() < 1e-10);
        assert!((o.sigma_parallel - theta.sin()).abs() < 1e-10);
        assert!((o.sigma_perp + theta.cos()).abs() < 1e-10);
    }

    #[test]
    fn unnormalized_field_is_rejected() {
        let (f, s) = initial(SpinState::UP, 0.0);
        let g = f.grid().clone();
        let doubled = SpinorField::new(
            g,
            f.component(0).iter().map(|v| v * 2.0).collect(),
            f.component(1).to_vec(),
        )
        .unwrap();
        assert!(matches!(observables_of(&doubled, &s), Err(Error::InvalidState(_))));
    }

    #[test]
    fn mixed_density_matrix_checks() {
        let rho = DensityMatrix2 {
            rho11: 0.5,
            rho22: 0.5,
            rho12: Complex64::new(0.0, 0.0),
        };
        rho.check().unwrap();
        assert!((rho.purity() - 0.5).abs() < 1e-15);
        let bad = DensityMatrix2 {
            rho11: 0.5,
            rho22: 0.5,
            rho12: Complex64::new(0.6, 0.0),
        };
        assert!(bad.check().is_err());
    }
}
