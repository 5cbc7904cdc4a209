use super::evolve::TimeSeries;
use crate::error::{config, Result};
use crate::qmcore::{MeasurementSetup, SpinState};
use crate::specfun::gaussian_weighted_integral;
use std::f64::consts::PI;

/// Below this |sinθ| the asymptotic integrals are replaced by their θ = 0 limit.
pub const SINGULAR_SIN_THETA: f64 = 1e-6;

/// Long-time spin components along and across the field.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSpin {
    pub sigma_parallel_inf: f64,
    pub sigma_perp_inf: f64,
    pub sigma_y_inf: f64,
    pub warnings: Vec<String>,
}

/// Long-time limit of ⟨σ∥⟩ and ⟨σ⊥⟩.
///
/// In each momentum mode the spin precesses about d(k); the components
/// transverse to d dephase across the packet and only the projection on
/// d̂(k) survives. With p = 2αk/Δ and w_eff = wΔ/α,
///
/// ```text
/// σ∥(∞) = ∫ ρ(p) (1 + p cosθ)(sinθ s_x + (p + cosθ) s_z) / D(p) dp
/// σ⊥(∞) = ∫ ρ(p) p sinθ (sinθ s_x + (p + cosθ) s_z) / D(p) dp
/// ```
///
/// where D = (p + cosθ)² + sin²θ, ρ(p) = w_eff e^{-p²w_eff²/4}/(2√π) and
/// (s_x, s_z) = (sinβ cosφ, cosβ). σ_y dephases completely.
pub fn asymptotic_spin(spin: &SpinState, setup: &MeasurementSetup) -> Result<AsymptoticSpin> {
    let [sx, _, sz] = spin.bloch();
    let (st, ct) = setup.theta.sin_cos();
    let closed = |par: f64, perp: f64| AsymptoticSpin {
        sigma_parallel_inf: par,
        sigma_perp_inf: perp,
        sigma_y_inf: 0.0,
        warnings: Vec::new(),
    };
    if st.abs() < SINGULAR_SIN_THETA {
        // field along ±z: σ_z is conserved and σ_x dephases
        return Ok(closed(sz * ct.signum(), 0.0));
    }
    if setup.alpha == 0.0 {
        return config("no spin-orbit coupling: the spin precesses without dephasing");
    }
    if setup.delta == 0.0 {
        return Ok(closed(ct * sz, st * sz));
    }
    let we = setup.w * setup.delta / setup.alpha;
    let norm = we / (2.0 * PI.sqrt());
    let den = move |p: f64| (p + ct) * (p + ct) + st * st;
    let proj = move |p: f64| st * sx + (p + ct) * sz;
    let par = gaussian_weighted_integral(|p| norm * (1.0 + p * ct) * proj(p) / den(p), we)?;
    let perp = gaussian_weighted_integral(|p| norm * p * st * proj(p) / den(p), we)?;
    Ok(AsymptoticSpin {
        sigma_parallel_inf: par.value,
        sigma_perp_inf: perp.value,
        sigma_y_inf: 0.0,
        warnings: [par.warning, perp.warning].into_iter().flatten().collect(),
    })
}

/// Shape of the (⟨σ_y⟩, ⟨σ⊥⟩) trajectory around a fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralSummary {
    pub initial: [f64; 2],
    pub final_point: [f64; 2],
    pub fixed_point: [f64; 2],
    /// |final − initial|.
    pub displacement: f64,
    /// Largest distance from the fixed point over the first quarter of the samples.
    pub early_radius: f64,
    /// Largest distance from the fixed point over the last quarter.
    pub late_radius: f64,
    /// Signed number of turns about the fixed point.
    pub turns: f64,
}

impl SpiralSummary {
    pub fn from_series(ts: &TimeSeries, fixed_point: [f64; 2]) -> Option<Self> {
        let n = ts.records.len();
        if n < 8 {
            return None;
        }
        let pts: Vec<[f64; 2]> = ts.records.iter().map(|r| [r.sigma_y, r.sigma_perp]).collect();
        let rel = |p: &[f64; 2]| [p[0] - fixed_point[0], p[1] - fixed_point[1]];
        let radius = |p: &[f64; 2]| {
            let d = rel(p);
            d[0].hypot(d[1])
        };
        let q = n / 4;
        let max_r = |s: &[[f64; 2]]| s.iter().map(radius).fold(0.0, f64::max);
        let mut turns = 0.0;
        for w in pts.windows(2) {
            let (a, b) = (rel(&w[0]), rel(&w[1]));
            turns += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
        }
        let (i, f) = (pts[0], pts[n - 1]);
        Some(SpiralSummary {
            initial: i,
            final_point: f,
            fixed_point,
            displacement: (f[0] - i[0]).hypot(f[1] - i[1]),
            early_radius: max_r(&pts[..q]),
            late_radius: max_r(&pts[n - q..]),
            turns: turns / (2.0 * PI),
        })
    }

    /// The trajectory circles the fixed point and ends closer than it started.
    pub fn winds_inward(&self) -> bool {
        self.turns.abs() >= 1.0 && self.late_radius < self.early_radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn theta_zero_dispatch() {
        let s = MeasurementSetup::zeeman_units(0.0, 1.0, 0.0).unwrap();
        let a = asymptotic_spin(&SpinState::new(0.6, 0.2), &s).unwrap();
        assert_eq!(a.sigma_parallel_inf, 0.6f64.cos());
        assert_eq!(a.sigma_perp_inf, 0.0);
    }

    #[test]
    fn near_zero_theta_is_continuous() {
        let spin = SpinState::new(0.6, 0.2);
        let s = MeasurementSetup::new(1.0, 1.0, 1e-3, 1.0, 0.0, 0.0).unwrap();
        let a = asymptotic_spin(&spin, &s).unwrap();
        assert!((a.sigma_parallel_inf - 0.6f64.cos()).abs() < 1e-2);
        assert!(a.sigma_perp_inf.abs() < 1e-2);
    }

    #[test]
    fn strong_and_weak_coupling_limits() {
        let spin = SpinState::new(0.7, 0.4);
        let (st, ct) = FRAC_PI_4.sin_cos();
        let weak = MeasurementSetup::zeeman_units(FRAC_PI_4, 100.0, 0.0).unwrap();
        let a = asymptotic_spin(&spin, &weak).unwrap();
        let expect = ct * 0.7f64.cos() + st * 0.4f64.cos() * 0.7f64.sin();
        assert!((a.sigma_parallel_inf - expect).abs() < 1e-2 * expect.abs());
        let strong = MeasurementSetup::zeeman_units(FRAC_PI_4, 0.01, 0.0).unwrap();
        let a = asymptotic_spin(&SpinState::UP, &strong).unwrap();
        assert!((a.sigma_parallel_inf - ct).abs() < 1e-2 * ct);
        assert!((a.sigma_perp_inf - st).abs() < 1e-2 * st);
        assert!(a.warnings.is_empty());
    }

    #[test]
    fn intermediate_values() {
        let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
        let a = asymptotic_spin(&SpinState::UP, &s).unwrap();
        assert!((a.sigma_parallel_inf - 0.5174).abs() < 2e-4);
        assert!((a.sigma_perp_inf - 0.2286).abs() < 2e-4);
    }

    #[test]
    fn no_coupling_rejected() {
        let s = MeasurementSetup::new(0.0, 1.0, 0.5, 1.0, 0.0, 0.0).unwrap();
        assert!(asymptotic_spin(&SpinState::UP, &s).is_err());
    }
}
