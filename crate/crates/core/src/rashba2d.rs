//! Joint measurement of σ_x and σ_y by a 2D Rashba pulse.
//!
//! During the pulse the Hamiltonian is H(k) = α̃(k_y σ_x − k_x σ_y) (plus
//! k²/2M at finite mass). The chirality is the one for which the propagator
//! matrix elements take the form
//!
//! ```text
//! U11(r) = w ∫ e^{-k²w²/4} cos(R k) J0(kr) k dk / √(2π)
//! U12(r, φ) = i e^{-iφ} w ∫ e^{-k²w²/4} sin(R k) J1(kr) k dk / √(2π),  U21 = U12*
//! ```
//!
//! and the pointer moments are ⟨x⟩ = −R⟨σ_y(0)⟩/2, ⟨y⟩ = R⟨σ_x(0)⟩/2.
//! Each k mode has eigenvalues ±α̃|k|, so the grid evolution is an exact
//! per-mode 2×2 exponential.

use crate::error::{config, Error, Result};
use crate::exec;
use crate::mat2::Mat2;
use crate::qmcore::{make_gaussian_state, Grid, MeasurementSetup, SpinState, SpinorField};
use crate::specfun::{damped_oscillatory_integral, j0, j1, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// Below this w/R_so the Bessel integrals are too close to singular at r ≈ R_so.
pub const MIN_W_OVER_RSO: f64 = 1e-3;
/// Largest w/R_so accepted by the asymptotic ring profile.
pub const MAX_RING_W_OVER_RSO: f64 = 0.1;

/// Propagator U(r, φ | T) with Ψ(T) = U ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorSample2D {
    pub r: f64,
    pub phi: f64,
    pub matrix: Mat2,
    /// U11 = U22 (real).
    pub diagonal: f64,
    /// Real radial integral I with U12 = i e^{-iφ} I.
    pub off_diagonal_radial: f64,
    pub warnings: Vec<String>,
}

/// Samples of the asymptotic radial function F(r|T).
#[derive(Debug, Clone, PartialEq)]
pub struct RingProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RingProfile {
    /// Index of the largest sample.
    pub fn argmax(&self) -> usize {
        argext(&self.values, |a, b| a > b)
    }

    /// Index of the smallest sample.
    pub fn argmin(&self) -> usize {
        argext(&self.values, |a, b| a < b)
    }
}

fn argext(v: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if better(x, v[best]) {
            best = i;
        }
    }
    best
}

/// ⟨x⟩, ⟨y⟩, ⟨x²⟩, ⟨y²⟩ of the pointer after the pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_x2: f64,
    pub mean_y2: f64,
}

impl PointerMoments {
    /// Small-w prediction: ⟨x⟩ = −R⟨σ_y(0)⟩/2, ⟨y⟩ = R⟨σ_x(0)⟩/2, ⟨x²⟩ = ⟨y²⟩ = R²/2.
    pub fn predicted(spin0: &SpinState, setup: &MeasurementSetup) -> Self {
        let r = setup.r_so();
        let [sx, sy, _] = spin0.bloch();
        PointerMoments {
            mean_x: -r * sy / 2.0,
            mean_y: r * sx / 2.0,
            mean_x2: r * r / 2.0,
            mean_y2: r * r / 2.0,
        }
    }
}

/// The two measurement-accuracy conditions: α ≫ v_sp and αT ≫ w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyReport {
    pub cond_speed: bool,
    pub cond_split: bool,
    /// α / v_sp (infinite at infinite mass).
    pub speed_ratio: f64,
    /// αT / w.
    pub split_ratio: f64,
}

/// Margin demanded for "≫".
pub const ACCURACY_MARGIN: f64 = 10.0;

pub fn accuracy_report(setup: &MeasurementSetup) -> AccuracyReport {
    let speed_ratio = if setup.v_sp == 0.0 {
        f64::INFINITY
    } else {
        setup.alpha / setup.v_sp
    };
    let split_ratio = setup.alpha * setup.duration / setup.w;
    AccuracyReport {
        cond_speed: speed_ratio >= ACCURACY_MARGIN,
        cond_split: split_ratio >= ACCURACY_MARGIN,
        speed_ratio,
        split_ratio,
    }
}

/// Reduced Planck constant in erg·s.
const HBAR_CGS: f64 = 1.054_571_817e-27;

/// Accuracy conditions for physical inputs in CGS units: coupling α in cm/s,
/// mass in g, width in cm, duration in s. `v_sp = ħ/(wM)`.
pub fn accuracy_report_cgs(alpha: f64, mass: f64, w: f64, duration: f64) -> AccuracyReport {
    let v_sp = HBAR_CGS / (w * mass);
    let speed_ratio = alpha / v_sp;
    let split_ratio = alpha * duration / w;
    AccuracyReport {
        cond_speed: speed_ratio >= ACCURACY_MARGIN,
        cond_split: split_ratio >= ACCURACY_MARGIN,
        speed_ratio,
        split_ratio,
    }
}

/// Exact mode propagator exp(−i t H(k)).
pub fn mode_propagator(k: [f64; 2], t: f64, setup: &MeasurementSetup) -> Mat2 {
    let a = setup.alpha_tilde();
    let u = Mat2::su2_exp(t, [a * k[1], -a * k[0], 0.0]);
    if setup.v_sp > 0.0 {
        let e = setup.kinetic_energy(k[0] * k[0] + k[1] * k[1]);
        u.scale_c(Complex64::from_polar(1.0, -e * t))
    } else {
        u
    }
}

fn check_ratio(setup: &MeasurementSetup) -> Result<()> {
    let r = setup.r_so();
    if r > 0.0 && setup.w / r < MIN_W_OVER_RSO {
        return config(format!(
            "w/R_so = {:.2e} is below {MIN_W_OVER_RSO:.0e}: propagator integrals are near-singular",
            setup.w / r
        ));
    }
    Ok(())
}

/// Grid-independent evaluation of U(r, φ | T) by radial quadrature.
pub fn propagator_elements(r: f64, phi: f64, setup: &MeasurementSetup) -> Result<PropagatorSample2D> {
    if setup.v_sp != 0.0 {
        return config("propagator_elements requires infinite mass (v_sp = 0)");
    }
    check_ratio(setup)?;
    let w = setup.w;
    let big_r = setup.r_so();
    let spec = QuadratureSpec::for_damped(w, big_r + r);
    let pref = w / (2.0 * PI).sqrt();
    let damp = move |k: f64| (-0.25 * k * k * w * w).exp() * k;
    let diag = damped_oscillatory_integral(|k| damp(k) * (big_r * k).cos() * j0(k * r), &spec)?;
    let off = damped_oscillatory_integral(|k| damp(k) * (big_r * k).sin() * j1(k * r), &spec)?;
    let u11 = pref * diag.value;
    let i12 = pref * off.value;
    let u12 = Complex64::new(0.0, 1.0) * Complex64::from_polar(i12, -phi);
    let warnings = [diag.warning, off.warning].into_iter().flatten().collect();
    Ok(PropagatorSample2D {
        r,
        phi,
        matrix: Mat2::new(Complex64::new(u11, 0.0), u12, u12.conj(), Complex64::new(u11, 0.0)),
        diagonal: u11,
        off_diagonal_radial: i12,
        warnings,
    })
}

/// Evolve ψ₀ ξ over the pulse duration on a 2D grid.
pub fn evolve_packet_2d(spin: &SpinState, setup: &MeasurementSetup, grid: &Grid) -> Result<SpinorField> {
    if grid.dim() != 2 {
        return config("evolve_packet_2d needs a 2D grid");
    }
    let t = setup.duration;
    let spread = setup.spread_width(t);
    grid.check_for(setup.w, setup.r_so() + 8.0 * (spread - setup.w))?;
    let psi0 = make_gaussian_state(setup, spin, grid)?;
    if t == 0.0 {
        return Ok(psi0);
    }
    Ok(psi0.apply_mode_operator(|k| mode_propagator(k, t, setup)))
}

/// Asymptotic radial function
/// F(r|T) = (w/√R) ∫₀^∞ e^{-k²w²/4} cos((R − r)k + π/4) √k dk / 2π.
pub fn ring_profile(setup: &MeasurementSetup, radii: &[f64]) -> Result<RingProfile> {
    let big_r = setup.r_so();
    let w = setup.w;
    if big_r <= 0.0 || w / big_r > MAX_RING_W_OVER_RSO {
        return config(format!(
            "ring profile is an asymptotic result valid for w/R_so <= {MAX_RING_W_OVER_RSO}; got w/R_so = {}",
            w / big_r
        ));
    }
    check_ratio(setup)?;
    let pref = w / (big_r.sqrt() * 2.0 * PI);
    let cutoff = (12.0 / w).sqrt();
    let values = exec::map_range(radii.len(), |i| {
        let d = big_r - radii[i];
        // k = u² removes the √k endpoint singularity
        let omega = 2.0 * d.abs() * cutoff + 1.0 / w.sqrt();
        let spec = QuadratureSpec::for_damped(1.0, 0.0);
        let spec = QuadratureSpec {
            cutoff,
            nodes: ((cutoff * omega / 4.0).ceil() as usize).max(4) * 16,
            ..spec
        };
        damped_oscillatory_integral(
            |u| {
                let k = u * u;
                2.0 * u * u * (-0.25 * k * k * w * w).exp() * (d * k + FRAC_PI_4).cos()
            },
            &spec,
        )
        .map(|q| pref * q.value)
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RingProfile {
        radii: radii.to_vec(),
        values,
    })
}

/// Pointer moments ⟨x⟩, ⟨y⟩, ⟨x²⟩, ⟨y²⟩ computed on the grid.
pub fn pointer_moments(field: &SpinorField) -> Result<PointerMoments> {
    let grid = field.grid();
    if grid.dim() != 2 {
        return config("pointer moments need a 2D field");
    }
    let n = field.norm();
    if (n - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidState(format!("field norm {n} is not 1")));
    }
    let a = field.component(0);
    let b = field.component(1);
    let [mx, my, mx2, my2] = exec::sum_range_vec::<4, _>(grid.len(), |i| {
        let [x, y] = grid.position(i);
        let rho = a[i].norm_sqr() + b[i].norm_sqr();
        [x * rho, y * rho, x * x * rho, y * y * rho]
    });
    let c = grid.cell();
    Ok(PointerMoments {
        mean_x: mx * c,
        mean_y: my * c,
        mean_x2: mx2 * c,
        mean_y2: my2 * c,
    })
}

/// Probability of finding the particle at distance greater than `radius`.
pub fn probability_outside(field: &SpinorField, radius: f64) -> f64 {
    let grid = field.grid();
    let a = field.component(0);
    let b = field.component(1);
    exec::sum_range(grid.len(), |i| {
        let [x, y] = grid.position(i);
        if x * x + y * y > radius * radius {
            a[i].norm_sqr() + b[i].norm_sqr()
        } else {
            0.0
        }
    }) * grid.cell()
}
