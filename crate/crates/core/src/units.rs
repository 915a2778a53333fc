//! Physical constants and conversion between SI and natural units.
//!
//! A dimensional quantity is described by its exponents over the basis
//! (length, hbar, c). With a reference length `L0`, the SI value is
//! `n * L0^a * hbar^b * c^d` where `n` is the pure number used internally.

use crate::error::{Error, Result};

/// Reduced Planck constant in J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in m/s.
pub const C: f64 = 2.997_924_58e8;

/// The two constants set to one in natural units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
}

impl Constants {
    pub const SI: Constants = Constants { hbar: HBAR, c: C };
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}

/// Exponents of a quantity over (length, hbar, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub length: i32,
    pub hbar: i32,
    pub c: i32,
}

impl Dims {
    pub const fn new(length: i32, hbar: i32, c: i32) -> Self {
        Self { length, hbar, c }
    }

    pub const DIMENSIONLESS: Dims = Dims::new(0, 0, 0);
    pub const LENGTH: Dims = Dims::new(1, 0, 0);
    pub const AREA: Dims = Dims::new(2, 0, 0);
    pub const WAVENUMBER: Dims = Dims::new(-1, 0, 0);
    pub const ACTION: Dims = Dims::new(0, 1, 0);
    pub const SPEED: Dims = Dims::new(0, 0, 1);
    pub const TIME: Dims = Dims::new(1, 0, -1);
    pub const ANGULAR_FREQUENCY: Dims = Dims::new(-1, 0, 1);
    pub const MASS: Dims = Dims::new(-1, 1, -1);
    pub const ENERGY: Dims = Dims::new(-1, 1, 1);
    pub const FORCE: Dims = Dims::new(-2, 1, 1);
    /// Force per displacement, the unit of a response tensor.
    pub const STIFFNESS: Dims = Dims::new(-3, 1, 1);
    pub const SURFACE_TENSION: Dims = Dims::new(-3, 1, 1);
    pub const VISCOSITY: Dims = Dims::new(-2, 1, 0);
    pub const MASS_PER_AREA: Dims = Dims::new(-3, 1, -1);
    pub const DENSITY: Dims = Dims::new(-4, 1, -1);
    /// Response kernels carry length^-5.
    pub const KERNEL: Dims = Dims::new(-5, 0, 0);
}

/// Map between SI values and pure numbers for a fixed reference length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NaturalScale {
    l0: f64,
    constants: Constants,
}

impl NaturalScale {
    pub fn new(l0: f64) -> Result<Self> {
        Self::with_constants(l0, Constants::SI)
    }

    pub fn with_constants(l0: f64, constants: Constants) -> Result<Self> {
        if !l0.is_finite() {
            return Err(Error::NonFinite("reference length"));
        }
        if l0 <= 0.0 {
            return Err(Error::InvalidInput("reference length must be positive"));
        }
        Ok(Self { l0, constants })
    }

    pub fn reference_length(&self) -> f64 {
        self.l0
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    /// SI value of one natural unit of `dims`.
    pub fn unit(&self, dims: Dims) -> f64 {
        powi(self.l0, dims.length) * powi(self.constants.hbar, dims.hbar) * powi(self.constants.c, dims.c)
    }

    pub fn to_natural(&self, x: f64, dims: Dims) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("dimensional quantity"));
        }
        Ok(x / self.unit(dims))
    }

    pub fn from_natural(&self, n: f64, dims: Dims) -> Result<f64> {
        if !n.is_finite() {
            return Err(Error::NonFinite("natural-unit quantity"));
        }
        Ok(n * self.unit(dims))
    }
}

fn powi(x: f64, e: i32) -> f64 {
    libm::pow(x, e as f64)
}

/// Sign with `sgn(0) = 0`.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn length_at_reference_is_one() {
        let s = NaturalScale::new(1e-3).unwrap();
        assert_relative_eq!(s.to_natural(1e-3, Dims::LENGTH).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(s.from_natural(1.0, Dims::LENGTH).unwrap(), 1e-3, max_relative = 1e-15);
    }

    #[test]
    fn hbar_is_one() {
        let s = NaturalScale::new(0.37).unwrap();
        assert_relative_eq!(s.to_natural(HBAR, Dims::ACTION).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(s.to_natural(C, Dims::SPEED).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_maps_to_zero() {
        let s = NaturalScale::new(2.0).unwrap();
        assert_eq!(s.from_natural(0.0, Dims::MASS).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(NaturalScale::new(0.0).is_err());
        assert!(NaturalScale::new(f64::NAN).is_err());
        let s = NaturalScale::new(1.0).unwrap();
        assert!(matches!(
            s.to_natural(f64::INFINITY, Dims::LENGTH),
            Err(Error::NonFinite(_))
        ));
        assert!(s.from_natural(f64::NAN, Dims::LENGTH).is_err());
    }

    #[test]
    fn mass_per_area_round_trip() {
        let s = NaturalScale::new(1e-3).unwrap();
        let n = s.to_natural(15.0, Dims::MASS_PER_AREA).unwrap();
        assert_relative_eq!(
            s.from_natural(n, Dims::MASS_PER_AREA).unwrap(),
            15.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn sign_of_zero() {
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn(-0.0), 0.0);
        assert_eq!(sgn(-3.0), -1.0);
    }

    fn dims() -> impl Strategy<Value = Dims> {
        (-6i32..=6, -2i32..=2, -4i32..=4).prop_map(|(a, b, c)| Dims::new(a, b, c))
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(mant in 1.0f64..10.0, exp in -6i32..6, l0_exp in -9i32..3, d in dims()) {
            let x = mant * libm::pow(10.0, exp as f64);
            let s = NaturalScale::new(libm::pow(10.0, l0_exp as f64)).unwrap();
            let back = s.from_natural(s.to_natural(x, d).unwrap(), d).unwrap();
            prop_assert!(((back - x) / x).abs() < 1e-14);
        }
    }
}
