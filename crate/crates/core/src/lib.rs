//! Spin-orbit coupling as a von Neumann spin meter.
//!
//! A spin-1/2 particle released from a Gaussian trap under a spin-orbit
//! coupling pulse is displaced according to its spin, so its own coordinate
//! acts as the pointer of a spin measurement. This crate evolves such
//! wavepackets exactly in momentum space and provides independent checks:
//!
//! - [`rashba2d`]: joint measurement of σ_x and σ_y in a 2D Rashba field
//!   (propagator integrals, ring profile, pointer moments);
//! - [`zeeman1d`]: measurement of σ_z in 1D with a non-commuting Zeeman
//!   field (Green functions, observables, decoherence, asymptotics);
//! - [`trotter`]: Lie–Trotter product formulas and exhaustive Feynman
//!   checkerboard path sums used as brute-force oracles.
//!
//! Grid kernels run on rayon when the `parallel` feature is enabled (the
//! default); all reductions are ordered so results do not depend on the
//! thread count.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod fft;
pub mod mat2;
pub mod qmcore;
pub mod rashba2d;
pub mod specfun;
pub mod trotter;
pub mod zeeman1d;

pub use error::{Error, Result};
pub use mat2::{Mat2, Spinor};
pub use qmcore::{
    make_gaussian_state, observables_of, DensityMatrix2, Grid, MeasurementSetup, ObservableSet,
    SpinState, SpinorField,
};
