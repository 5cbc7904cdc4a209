//! Domain types shared by the 1D and 2D evolution modules: physical setup,
//! spin states, uniform grids, sampled spinor fields and spin observables.
//!
//! Units: ħ = 1. The 1D module works with α = 1 and Δ̃ = Δ sinθ = 1, so time
//! is measured in 1/Δ̃ and length in α/Δ̃. The 2D module measures lengths in
//! units of the measurement radius R_so = α̃T, with α̃ = α/√2; only the ratio
//! w/R_so matters there when the mass is infinite.

mod field;
mod grid;
mod observables;
mod setup;

pub use field::{make_gaussian_state, SpinorField};
pub use grid::{Axis, Grid};
pub use observables::{density_matrix, observables_of, DensityMatrix2, ObservableSet};
pub use setup::{MeasurementSetup, SpinState};
