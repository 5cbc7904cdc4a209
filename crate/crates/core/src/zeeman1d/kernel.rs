use crate::error::{config, Result};
use crate::mat2::Mat2;
use crate::qmcore::MeasurementSetup;
use crate::specfun::{gaussian_weighted_integral_with, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Per-mode quantities of the spin part of the 1D propagator.
///
/// With q = 2k + γ the mode evolves as
/// `[[C − i qα S/E, −i Δ̃ S/E], [−i Δ̃ S/E, C + i qα S/E]]`,
/// E = √(q²α² + Δ̃²), C = cos(tE/2), S = sin(tE/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeKernelParams {
    /// Δcosθ/α (infinite when α = 0).
    pub gamma: f64,
    /// 2k + γ.
    pub q: f64,
    pub delta_tilde: f64,
    pub c: f64,
    pub s: f64,
    /// qα, kept finite at α = 0.
    pub q_alpha: f64,
    /// E = √(q²α² + Δ̃²).
    pub energy: f64,
    t: f64,
}

impl ModeKernelParams {
    pub fn new(k: f64, t: f64, setup: &MeasurementSetup) -> Self {
        let gamma = setup.gamma();
        let q_alpha = 2.0 * setup.alpha * k + setup.delta * setup.theta.cos();
        let delta_tilde = setup.delta_tilde();
        let energy = q_alpha.hypot(delta_tilde);
        let (s, c) = (0.5 * t * energy).sin_cos();
        ModeKernelParams {
            gamma,
            q: 2.0 * k + gamma,
            delta_tilde,
            c,
            s,
            q_alpha,
            energy,
            t,
        }
    }

    /// S/E with its t/2 limit at E = 0.
    fn s_over_e(&self) -> f64 {
        if self.energy < 1e-300 {
            0.5 * self.t
        } else {
            self.s / self.energy
        }
    }

    pub fn g11(&self) -> Complex64 {
        Complex64::new(self.c, -self.q_alpha * self.s_over_e())
    }

    pub fn g22(&self) -> Complex64 {
        Complex64::new(self.c, self.q_alpha * self.s_over_e())
    }

    pub fn g12(&self) -> Complex64 {
        Complex64::new(0.0, -self.delta_tilde * self.s_over_e())
    }

    /// Spin part of the mode propagator.
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.g11(), self.g12(), self.g12(), self.g22())
    }
}

/// Exact mode propagator exp(−i t H(k)): the kinetic phase e^{-ik²t/2M} times
/// exp(−i t d·σ), d = (Δ̃/2, 0, αk + Δcosθ/2).
pub fn mode_propagator(k: f64, t: f64, setup: &MeasurementSetup) -> Mat2 {
    let d = [
        0.5 * setup.delta_tilde(),
        0.0,
        setup.alpha * k + 0.5 * setup.delta * setup.theta.cos(),
    ];
    let u = Mat2::su2_exp(t, d);
    if setup.v_sp > 0.0 {
        u.scale_c(Complex64::from_polar(1.0, -setup.kinetic_energy(k * k) * t))
    } else {
        u
    }
}

/// Green function smoothed by the initial packet.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenSample1D {
    pub x: f64,
    pub t: f64,
    pub matrix: Mat2,
    pub warnings: Vec<String>,
}

/// Default quadrature for [`green_function`]: cutoff where e^{-k²w²/2} is
/// e^{-36}, tolerance 1e-12.
pub fn green_spec(setup: &MeasurementSetup) -> QuadratureSpec {
    QuadratureSpec {
        nodes: 256,
        cutoff: 12.0 / (2f64.sqrt() * setup.w),
        tolerance: 1e-12,
    }
}

/// G_w(x|t) = ∫ G(x − x'|t) ψ₀(x') dx', evaluated in momentum space as
/// ∫ G(k|t) ψ₀(k) e^{ikx} dk/2π with the kernel in its (q, C, S) form.
///
/// `G_w(x|t) ξ` is the evolved spinor at `x`. Since dq/4π = dk/2π and
/// e^{-iγx/2} e^{iqx/2} = e^{ikx}, this is the Green function convolved
/// with the packet. G₁₂ = G₂₁ holds by construction.
pub fn green_function(
    x: f64,
    t: f64,
    setup: &MeasurementSetup,
    spec: QuadratureSpec,
) -> Result<GreenSample1D> {
    if !(t >= 0.0) {
        return config("green_function requires t >= 0");
    }
    let w = setup.w;
    // ψ₀(k) = (4π)^{1/4} √w e^{-k²w²/2}; the exponential is the quadrature weight
    let amp = (4.0 * PI).powf(0.25) * w.sqrt() / (2.0 * PI);
    let phase = move |k: f64| {
        let kin = setup.kinetic_energy(k * k) * t;
        Complex64::from_polar(amp, k * x - kin)
    };
    let ww = 2f64.sqrt() * w;
    let mk = move |k: f64| ModeKernelParams::new(k, t, setup);
    let g11 = gaussian_weighted_integral_with(|k| mk(k).g11() * phase(k), ww, spec)?;
    let g22 = gaussian_weighted_integral_with(|k| mk(k).g22() * phase(k), ww, spec)?;
    let g12 = gaussian_weighted_integral_with(|k| mk(k).g12() * phase(k), ww, spec)?;
    let warnings = [g11.warning, g22.warning, g12.warning]
        .into_iter()
        .flatten()
        .collect();
    Ok(GreenSample1D {
        x,
        t,
        matrix: Mat2::new(g11.value, g12.value, g12.value, g22.value),
        warnings,
    })
}
