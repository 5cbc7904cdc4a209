use super::kernel::mode_propagator;
use crate::error::{config, Result};
use crate::exec;
use crate::fft::Fft1;
use crate::qmcore::{
    make_gaussian_state, observables_of, Grid, MeasurementSetup, ObservableSet, SpinState,
    SpinorField,
};
use num_complex::Complex64;

/// Density below which the local velocity is reported as undefined.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Evolve ψ₀ ξ to time `t` by exact per-mode exponentiation.
///
/// The grid must satisfy k_max ≥ 8/w and extent ≥ 2(αt + 8w'), where w' is
/// the freely spread width at `t`.
pub fn evolve_packet_1d(
    spin: &SpinState,
    setup: &MeasurementSetup,
    grid: &Grid,
    t: f64,
) -> Result<SpinorField> {
    if grid.dim() != 1 {
        return config("evolve_packet_1d needs a 1D grid");
    }
    if !(t >= 0.0) || !t.is_finite() {
        return config("evolution time must be finite and non-negative");
    }
    let spread = setup.spread_width(t);
    grid.check_for(setup.w, setup.alpha * t + 8.0 * (spread - setup.w))?;
    let psi0 = make_gaussian_state(setup, spin, grid)?;
    if t == 0.0 {
        return Ok(psi0);
    }
    Ok(psi0.apply_mode_operator(|k| mode_propagator(k[0], t, setup)))
}

/// v(x|t) = α Ψ†σ_zΨ / Ψ†Ψ, `None` where the density is below [`DENSITY_FLOOR`].
pub fn local_velocity(field: &SpinorField, setup: &MeasurementSetup) -> Vec<Option<f64>> {
    let a = field.component(0);
    let b = field.component(1);
    exec::map_range(a.len(), |i| {
        let (pa, pb) = (a[i].norm_sqr(), b[i].norm_sqr());
        let rho = pa + pb;
        (rho >= DENSITY_FLOOR).then(|| (setup.alpha * (pa - pb) / rho).clamp(-setup.alpha, setup.alpha))
    })
}

/// Observables of one evolution sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub records: Vec<ObservableSet>,
}

impl TimeSeries {
    /// Central-difference d⟨x⟩/dt at the interior samples, as `(t, v)` pairs.
    pub fn mean_x_derivative(&self) -> Vec<(f64, f64)> {
        let t = &self.times;
        let r = &self.records;
        (1..t.len().saturating_sub(1))
            .map(|i| (t[i], (r[i + 1].mean_x - r[i - 1].mean_x) / (t[i + 1] - t[i - 1])))
            .collect()
    }

    /// max |d⟨x⟩/dt − α⟨σ_z⟩| over the interior samples.
    pub fn velocity_spin_defect(&self, alpha: f64) -> f64 {
        self.mean_x_derivative()
            .iter()
            .zip(&self.records[1..])
            .map(|(&(_, v), rec)| (v - alpha * rec.sigma_z).abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of ⟨x(t)⟩ through the origin over samples with t ≤ t_max.
    pub fn short_time_slope(&self, t_max: f64) -> Option<f64> {
        let (mut num, mut den) = (0.0, 0.0);
        for (t, r) in self.times.iter().zip(&self.records) {
            if *t <= t_max {
                num += t * (r.mean_x - self.records[0].mean_x);
                den += t * t;
            }
        }
        (den > 0.0).then(|| num / den)
    }

    /// Record closest to time `t`.
    pub fn at(&self, t: f64) -> Option<&ObservableSet> {
        let i = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?
            .0;
        self.records.get(i)
    }
}

/// Observables at each of `times` (strictly increasing).
pub fn time_series(
    spin: &SpinState,
    setup: &MeasurementSetup,
    grid: &Grid,
    times: &[f64],
) -> Result<TimeSeries> {
    if times.windows(2).any(|p| !(p[1] > p[0])) {
        return config("time samples must be strictly increasing");
    }
    let records = exec::map_range(times.len(), |i| {
        let field = evolve_packet_1d(spin, setup, grid, times[i])?;
        observables_of(&field, setup)
    });
    Ok(TimeSeries {
        times: times.to_vec(),
        records: records.into_iter().collect::<Result<_>>()?,
    })
}

/// max over x of |∂ρ/∂t + ∂j/∂x| with j = α Ψ†σ_zΨ.
///
/// ∂ρ/∂t is the central difference of `prev` and `next` over 2·dt; ∂j/∂x is
/// taken spectrally from `cur`, so the residual measures the O(dt²) error of
/// the time difference plus roundoff.
pub fn continuity_residual(
    prev: &SpinorField,
    cur: &SpinorField,
    next: &SpinorField,
    dt: f64,
    setup: &MeasurementSetup,
) -> Result<f64> {
    if setup.v_sp != 0.0 {
        return config("continuity check assumes infinite mass (v_sp = 0)");
    }
    if !(dt > 0.0) {
        return config("dt must be positive");
    }
    let grid = cur.grid();
    if grid.dim() != 1 || prev.grid() != grid || next.grid() != grid {
        return config("continuity check needs three snapshots on one 1D grid");
    }
    let n = grid.len();
    let (a, b) = (cur.component(0), cur.component(1));
    let mut j: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(setup.alpha * (a[i].norm_sqr() - b[i].norm_sqr()), 0.0))
        .collect();
    let fft = Fft1::new(n);
    fft.forward(&mut j);
    let axis = grid.axis(0);
    for (m, v) in j.iter_mut().enumerate() {
        *v = if 2 * m == n {
            Complex64::new(0.0, 0.0)
        } else {
            *v * Complex64::new(0.0, axis.wavenumber(m))
        };
    }
    fft.inverse(&mut j);
    let rp = prev.density();
    let rn = next.density();
    Ok((0..n)
        .map(|i| ((rn[i] - rp[i]) / (2.0 * dt) + j[i].re).abs())
        .fold(0.0, f64::max))
}
