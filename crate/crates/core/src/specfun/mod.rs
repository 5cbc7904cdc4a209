//! Special functions and quadrature engines used by the propagator formulas.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j, j0, j1};
pub use quadrature::{
    damped_oscillatory_integral, gauss_legendre, gaussian_weighted_integral,
    gaussian_weighted_integral_with, QuadResult, QuadValue, QuadratureSpec, DEFAULT_TOLERANCE,
};
