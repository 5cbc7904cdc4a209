use crate::error::{config, Error, Result};
use crate::mat2::Mat2;
use crate::qmcore::{MeasurementSetup, SpinorField};
use num_complex::Complex64;

/// Order of the two shears inside one product step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitOrder {
    /// exp(+α̃ε∂_xσ_y) exp(−α̃ε∂_yσ_x): the y shear acts first.
    #[default]
    AsWritten,
    /// exp(−α̃ε∂_yσ_x) exp(+α̃ε∂_xσ_y): the x shear acts first.
    Reversed,
}

/// Σ_m P_m^{axis} e^{i m θ}: shifts the m-eigencomponent of σ_axis.
fn shear(axis: usize, theta: f64) -> Mat2 {
    Mat2::projector(axis, 1).scale_c(Complex64::from_polar(1.0, theta))
        + Mat2::projector(axis, -1).scale_c(Complex64::from_polar(1.0, -theta))
}

/// Apply L product-formula steps of the Rashba pulse to `field`.
///
/// Per step the σ_y = m component moves by −mα̃ε along x and the σ_x = m
/// component by +mα̃ε along y. The shifts are applied spectrally, so they
/// are exact translations of the band-limited field.
pub fn trotter_step_product_2d(
    steps: usize,
    setup: &MeasurementSetup,
    field: &SpinorField,
    order: SplitOrder,
) -> Result<SpinorField> {
    if steps == 0 {
        return config("at least one Trotter step is required");
    }
    if setup.v_sp != 0.0 {
        return config("the product formula is applied at infinite mass (v_sp = 0)");
    }
    let grid = field.grid();
    if grid.dim() != 2 {
        return config("trotter_step_product_2d needs a 2D field");
    }
    let n = field.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!("field norm {n} is not 1")));
    }
    let r = setup.r_so();
    if grid.min_extent() < 2.0 * (r + 8.0 * setup.w) {
        return config(format!(
            "total shift {r:.4} per axis does not fit in a grid of extent {:.4}",
            grid.min_extent()
        ));
    }
    let a = setup.alpha_tilde() * setup.duration / steps as f64;
    Ok(field.apply_mode_operator(|k| {
        let x = shear(1, a * k[0]);
        let y = shear(0, -a * k[1]);
        let step = match order {
            SplitOrder::AsWritten => x * y,
            SplitOrder::Reversed => y * x,
        };
        (0..steps).fold(Mat2::identity(), |acc, _| step * acc)
    }))
}
