use crate::error::{Error, Result};

/// J₀(z).
#[inline]
pub fn j0(z: f64) -> f64 {
    libm::j0(z)
}

/// J₁(z).
#[inline]
pub fn j1(z: f64) -> f64 {
    libm::j1(z)
}

/// Bessel function of the first kind of order 0 or 1.
pub fn bessel_j(order: u32, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("Bessel argument {z} is not finite")));
    }
    match order {
        0 => Ok(j0(z)),
        1 => Ok(j1(z)),
        n => Err(Error::Domain(format!("Bessel order {n} is not supported (only 0 and 1)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn unsupported_order() {
        assert!(matches!(bessel_j(2, 1.0), Err(Error::Domain(_))));
        assert!(bessel_j(0, f64::NAN).is_err());
    }
}
