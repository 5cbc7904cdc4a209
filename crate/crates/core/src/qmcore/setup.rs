use crate::error::{config, Result};
use crate::mat2::Spinor;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Initial spin direction: ξ = (cos(β/2) e^{iφ}, sin(β/2)).
///
/// Because the phase sits on the upper component, the Bloch azimuth of the
/// state is −φ: ⟨σ_x⟩ = sinβ cosφ, ⟨σ_y⟩ = −sinβ sinφ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    pub beta: f64,
    pub phi: f64,
}

impl SpinState {
    pub const UP: SpinState = SpinState { beta: 0.0, phi: 0.0 };

    pub fn new(beta: f64, phi: f64) -> Self {
        SpinState { beta, phi }
    }

    pub fn spinor(&self) -> Spinor {
        let (s, c) = (self.beta / 2.0).sin_cos();
        [Complex64::from_polar(c, self.phi), Complex64::new(s, 0.0)]
    }

    /// Bloch vector (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) of the spinor.
    pub fn bloch(&self) -> [f64; 3] {
        let sb = self.beta.sin();
        [sb * self.phi.cos(), -sb * self.phi.sin(), self.beta.cos()]
    }

    /// The same spin rotated by `chi` about the z axis.
    pub fn rotated_about_z(&self, chi: f64) -> Self {
        SpinState {
            beta: self.beta,
            phi: self.phi - chi,
        }
    }
}

/// Physical parameters of one measurement.
///
/// `v_sp = 1/(wM)` is the free spreading speed of the packet; `v_sp = 0`
/// encodes infinite mass, in which case the kinetic term is dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetup {
    pub alpha: f64,
    pub delta: f64,
    pub theta: f64,
    pub w: f64,
    pub duration: f64,
    pub v_sp: f64,
}

impl MeasurementSetup {
    pub fn new(
        alpha: f64,
        delta: f64,
        theta: f64,
        w: f64,
        duration: f64,
        v_sp: f64,
    ) -> Result<Self> {
        let s = MeasurementSetup {
            alpha,
            delta,
            theta,
            w,
            duration,
            v_sp,
        };
        s.validate()?;
        Ok(s)
    }

    /// 1D setup in the natural units α = 1, Δ̃ = 1 (Δ = 1/sinθ; Δ = 1 when sinθ = 0).
    pub fn zeeman_units(theta: f64, w: f64, v_sp: f64) -> Result<Self> {
        let st = theta.sin();
        let delta = if st.abs() < 1e-12 { 1.0 } else { 1.0 / st };
        Self::new(1.0, delta, theta, w, 0.0, v_sp)
    }

    /// 2D setup with α = 1, no Zeeman field, and T chosen so that R_so = 1.
    pub fn rashba_units(w_over_rso: f64) -> Result<Self> {
        Self::new(1.0, 0.0, 0.0, w_over_rso, 1.0 / FRAC_1_SQRT_2, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.alpha,
            self.delta,
            self.theta,
            self.w,
            self.duration,
            self.v_sp,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return config("all setup parameters must be finite");
        }
        if self.w <= 0.0 {
            return config("w must be positive");
        }
        if self.duration < 0.0 {
            return config("duration T must be non-negative");
        }
        if self.v_sp < 0.0 {
            return config("v_sp must be non-negative");
        }
        if self.alpha < 0.0 {
            return config("alpha must be non-negative");
        }
        if self.delta < 0.0 {
            return config("delta must be non-negative");
        }
        if !(0.0..=PI).contains(&self.theta) {
            return config("theta must lie in [0, pi]");
        }
        Ok(())
    }

    pub fn with_duration(mut self, t: f64) -> Self {
        self.duration = t;
        self
    }

    pub fn with_w(mut self, w: f64) -> Self {
        self.w = w;
        self
    }

    /// Rashba coupling α̃ = α/√2.
    pub fn alpha_tilde(&self) -> f64 {
        self.alpha * FRAC_1_SQRT_2
    }

    /// Measurement radius R_so = α̃T.
    pub fn r_so(&self) -> f64 {
        self.alpha_tilde() * self.duration
    }

    /// Transverse Zeeman splitting Δ̃ = Δ sinθ.
    pub fn delta_tilde(&self) -> f64 {
        self.delta * self.theta.sin()
    }

    /// γ = Δ cosθ / α (infinite when α = 0).
    pub fn gamma(&self) -> f64 {
        self.delta * self.theta.cos() / self.alpha
    }

    /// Unit field direction b = (sinθ, 0, cosθ).
    pub fn field_direction(&self) -> [f64; 3] {
        [self.theta.sin(), 0.0, self.theta.cos()]
    }

    /// Effective mass M = 1/(w v_sp), `None` when infinite.
    pub fn mass(&self) -> Option<f64> {
        (self.v_sp > 0.0).then(|| 1.0 / (self.w * self.v_sp))
    }

    /// Kinetic energy k²/2M of a plane wave (0 at infinite mass).
    #[inline]
    pub fn kinetic_energy(&self, k2: f64) -> f64 {
        0.5 * k2 * self.w * self.v_sp
    }

    /// Width of the freely spreading Gaussian at time `t`.
    pub fn spread_width(&self, t: f64) -> f64 {
        let r = self.v_sp * t / self.w;
        self.w * (1.0 + r * r).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spinor_is_normalized() {
        for &(b, p) in &[(0.0, 0.0), (0.3, 1.1), (PI / 2.0, -2.0), (PI, 0.4)] {
            let xi = SpinState::new(b, p).spinor();
            let n = xi[0].norm_sqr() + xi[1].norm_sqr();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bloch_vector_matches_spinor() {
        let s = SpinState::new(1.1, 0.7);
        let xi = s.spinor();
        let r12 = xi[0] * xi[1].conj();
        let b = s.bloch();
        assert!((b[0] - 2.0 * r12.re).abs() < 1e-15);
        assert!((b[1] + 2.0 * r12.im).abs() < 1e-15);
        assert!((b[2] - (xi[0].norm_sqr() - xi[1].norm_sqr())).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        assert!(MeasurementSetup::new(1.0, 1.0, 0.5, 0.0, 1.0, 0.0).is_err());
        assert!(MeasurementSetup::new(1.0, 1.0, 4.0, 1.0, 1.0, 0.0).is_err());
        assert!(MeasurementSetup::new(-1.0, 1.0, 0.5, 1.0, 1.0, 0.0).is_err());
        assert!(MeasurementSetup::new(1.0, 1.0, 0.5, 1.0, -1.0, 0.0).is_err());
        assert!(MeasurementSetup::new(1.0, 1.0, 0.5, 1.0, 1.0, -0.1).is_err());
        assert!(MeasurementSetup::new(1.0, f64::NAN, 0.5, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn unit_helpers() {
        let s = MeasurementSetup::zeeman_units(PI / 4.0, 1.0, 0.0).unwrap();
        assert!((s.delta_tilde() - 1.0).abs() < 1e-15);
        assert!((s.gamma() - 1.0).abs() < 1e-14);
        assert!(s.mass().is_none());
        let r = MeasurementSetup::rashba_units(0.01).unwrap();
        assert!((r.r_so() - 1.0).abs() < 1e-15);
    }
}
