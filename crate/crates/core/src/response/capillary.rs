//! Vacuum corrections to capillary waves on a liquid film facing a plate.

use crate::error::{Error, Result};
use crate::kernels::Separation;
use crate::units::{C, HBAR};

use super::QUOTED_B;

/// Shifts of the areal density (kg/m^2), surface tension (N/m) and the
/// relative change of the capillary wave speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapillaryCorrections {
    pub delta_rho: f64,
    pub delta_sigma: f64,
    pub relative_speed_shift: f64,
}

/// `d_rho = hbar B/(48 c H^3)`, `d_sigma = hbar c B/(48 H^3)`,
/// `d_cs/cs = hbar c B/(96 sigma H^3)`; all vanish for a single plate.
pub fn capillary_corrections(separation: Separation, surface_tension: f64) -> Result<CapillaryCorrections> {
    separation.validate()?;
    if !(surface_tension.is_finite() && surface_tension > 0.0) {
        return Err(Error::InvalidInput("surface tension must be positive"));
    }
    let h = match separation {
        Separation::Finite(h) => h,
        Separation::Infinite => {
            return Ok(CapillaryCorrections {
                delta_rho: 0.0,
                delta_sigma: 0.0,
                relative_speed_shift: 0.0,
            })
        }
    };
    let h3 = h * h * h;
    Ok(CapillaryCorrections {
        delta_rho: HBAR * QUOTED_B / (48.0 * C * h3),
        delta_sigma: HBAR * C * QUOTED_B / (48.0 * h3),
        relative_speed_shift: HBAR * C * QUOTED_B / (96.0 * surface_tension * h3),
    })
}
