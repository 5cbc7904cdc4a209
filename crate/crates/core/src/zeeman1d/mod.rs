//! 1D measurement of σ_z under H = k²/2M + αkσ_z + (Δ/2)(b·σ), b = (sinθ, 0, cosθ).
//!
//! The spin-orbit term moves the packet with velocity ±α depending on σ_z,
//! while the Zeeman term rotates σ_z into σ_x. The reported quantities are
//! the packet trajectory, width, spin components along and across the
//! field, and the purity of the reduced spin state.

mod asymptotic;
mod evolve;
mod kernel;

pub use asymptotic::{asymptotic_spin, AsymptoticSpin, SpiralSummary, SINGULAR_SIN_THETA};
pub use evolve::{
    continuity_residual, evolve_packet_1d, local_velocity, time_series, TimeSeries,
    DENSITY_FLOOR,
};
pub use kernel::{green_function, green_spec, mode_propagator, GreenSample1D, ModeKernelParams};
