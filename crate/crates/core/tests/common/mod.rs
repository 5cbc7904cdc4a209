//! Independent closed forms used as oracles by several test targets.
#![allow(dead_code)]

use num_complex::Complex64;
use spinmeter_core::{Mat2, MeasurementSetup};
use std::f64::consts::PI;

/// Freely spreading Gaussian:
/// π^{-1/4}(w(1 + iτ))^{-1/2} exp(−x²/(2w²(1 + iτ))), τ = v_sp t / w.
pub fn free_packet(x: f64, t: f64, s: &MeasurementSetup) -> Complex64 {
    let z = Complex64::new(1.0, s.v_sp * t / s.w);
    let w2 = s.w * s.w;
    (-(x * x) / (z * 2.0 * w2)).exp() / (z * s.w).sqrt() * PI.powf(-0.25)
}

/// Diagonal Green function of the commuting case smoothed by the packet.
pub fn commuting_green(x: f64, t: f64, s: &MeasurementSetup) -> Mat2 {
    let (a, d) = (s.alpha, s.delta);
    Mat2::new(
        Complex64::from_polar(1.0, -t * d / 2.0) * free_packet(x - a * t, t, s),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, t * d / 2.0) * free_packet(x + a * t, t, s),
    )
}

/// Larmor rotation times the free packet (no spin-orbit coupling).
pub fn factorized_green(x: f64, t: f64, s: &MeasurementSetup) -> Mat2 {
    let b = s.field_direction();
    Mat2::su2_exp(t, [0.5 * s.delta * b[0], 0.0, 0.5 * s.delta * b[2]]).scale_c(free_packet(x, t, s))
}

/// Π_{j=1}^{L} [e^{−iεαkσ_z} e^{−iεΔ(b·σ)/2}] multiplied out directly.
pub fn direct_product(k: f64, steps: usize, s: &MeasurementSetup) -> Mat2 {
    let eps = s.duration / steps as f64;
    let b = s.field_direction();
    let z = Mat2::su2_exp(eps, [0.5 * s.delta * b[0], 0.0, 0.5 * s.delta * b[2]]);
    let kin = Mat2::new(
        Complex64::from_polar(1.0, -eps * s.alpha * k),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, eps * s.alpha * k),
    );
    let step = kin * z;
    (0..steps).fold(Mat2::identity(), |acc, _| step * acc)
}
