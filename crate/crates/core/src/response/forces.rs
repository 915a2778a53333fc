//! Static and sliding lateral forces between corrugated plates, and the
//! linear-response force spectrum.
//!
//! With plate 1 at `d1 cos(k.x)` and plate 2 at `d2 cos(k.x + alpha)` the
//! static energy is `U = hbar c A/2 A-(k, 0) d1 d2 cos(alpha)`, minimal at
//! `alpha = pi`. Displacing plate 1 by `r` shifts the phase to `alpha + k.r`,
//! so the force on plate 1 is `F = hbar c A/2 A-(k, 0) d1 d2 sin(alpha) k`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CorrugationSpec, PlateGeometry, ResponseModel, ResponseTensor};
use crate::error::{Error, Result};
use crate::kernels::Separation;
use crate::units::{C, HBAR};

/// Slow-motion bound on the sliding speed, as a fraction of `c`.
pub const MAX_SPEED_FRACTION: f64 = 0.01;

/// Prefactors of the static interaction at one wave vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JosephsonCoupling {
    /// Wave vector `k` (1/m).
    pub wavevector: [f64; 2],
    /// `hbar c A/2 A-(k, 0) d1 d2`, in J.
    pub energy_scale: f64,
}

impl JosephsonCoupling {
    /// Force magnitude at `alpha = pi/2`, in N.
    pub fn force_scale(&self) -> f64 {
        self.energy_scale * libm::hypot(self.wavevector[0], self.wavevector[1])
    }

    /// Static energy as a function of the phase offset.
    pub fn static_energy(&self, alpha: f64) -> f64 {
        self.energy_scale * libm::cos(alpha)
    }

    /// Static force on plate 1.
    pub fn dc_force(&self, alpha: f64) -> [f64; 2] {
        let s = self.energy_scale * libm::sin(alpha);
        [s * self.wavevector[0], s * self.wavevector[1]]
    }

    /// Force on plate 1 sliding at constant `velocity` from phase offset
    /// `alpha0`, sampled at `times`; oscillates at `k.v`.
    pub fn ac_force(&self, velocity: [f64; 2], alpha0: f64, times: &[f64]) -> Result<Vec<[f64; 2]>> {
        if !(velocity.iter().all(|v| v.is_finite()) && alpha0.is_finite()) {
            return Err(Error::NonFinite("sliding velocity"));
        }
        let frac = libm::hypot(velocity[0], velocity[1]) / C;
        if frac >= MAX_SPEED_FRACTION {
            return Err(Error::Relativistic { speed_fraction: frac });
        }
        let kv = self.wavevector[0] * velocity[0] + self.wavevector[1] * velocity[1];
        Ok(times.iter().map(|&t| self.dc_force(alpha0 + kv * t)).collect())
    }
}

impl ResponseModel {
    /// Coupling for plates with wave vector `k`, amplitudes `d1`, `d2`.
    pub fn josephson(
        &self,
        k: [f64; 2],
        d1: f64,
        d2: f64,
        area: f64,
        separation: Separation,
    ) -> Result<JosephsonCoupling> {
        let geometry = PlateGeometry::new(area, separation)?;
        if separation.finite().is_none() {
            return Err(Error::InvalidInput("the Josephson analogue needs two plates"));
        }
        if !(d1.is_finite() && d2.is_finite() && k.iter().all(|x| x.is_finite())) {
            return Err(Error::NonFinite("Josephson parameters"));
        }
        let kn = libm::hypot(k[0], k[1]);
        let a_minus = if kn == 0.0 || d1 == 0.0 || d2 == 0.0 {
            0.0
        } else {
            self.kernels_si(kn, 0.0, separation)?.1.re
        };
        Ok(JosephsonCoupling {
            wavevector: k,
            energy_scale: 0.5 * HBAR * C * geometry.area * a_minus * d1 * d2,
        })
    }

    /// Static force on plate 1 per `alpha = alpha2 - alpha1`.
    pub fn josephson_dc(
        &self,
        k: [f64; 2],
        d1: f64,
        d2: f64,
        alpha: f64,
        area: f64,
        separation: Separation,
    ) -> Result<[f64; 2]> {
        Ok(self.josephson(k, d1, d2, area, separation)?.dc_force(alpha))
    }

    /// Sliding force trace at frequency `k.v`.
    #[allow(clippy::too_many_arguments)]
    pub fn josephson_ac(
        &self,
        k: [f64; 2],
        d1: f64,
        d2: f64,
        velocity: [f64; 2],
        area: f64,
        separation: Separation,
        times: &[f64],
    ) -> Result<Vec<[f64; 2]>> {
        self.josephson(k, d1, d2, area, separation)?
            .ac_force(velocity, 0.0, times)
    }

    /// Static lateral force on plate 1 from the Fourier-space expression
    /// `f = -hbar c A/2 sum_q i q A-(q, 0) [h1(q) h2(-q) - h1(-q) h2(q)]`,
    /// with `h(q) = (1/A) int e^{iq.x} h(x)`.
    pub fn residual_force(
        &self,
        c1: &CorrugationSpec,
        c2: Option<&CorrugationSpec>,
        geometry: &PlateGeometry,
    ) -> Result<[f64; 2]> {
        c1.validate()?;
        geometry.validate()?;
        let c2 = match c2 {
            Some(c2) => {
                c2.validate()?;
                c2
            }
            None => return Ok([0.0, 0.0]),
        };
        if geometry.separation.finite().is_none() {
            return Ok([0.0, 0.0]);
        }
        let lines = |c: &CorrugationSpec| {
            let half = 0.5 * c.amplitude;
            let k = c.wavevector;
            [
                (k, Complex64::from_polar(half, -c.phase)),
                ([-k[0], -k[1]], Complex64::from_polar(half, c.phase)),
            ]
        };
        let (l1, l2) = (lines(c1), lines(c2));
        let find = |l: &[([f64; 2], Complex64); 2], q: [f64; 2]| -> Complex64 {
            l.iter()
                .find(|(k, _)| {
                    let scale = libm::hypot(q[0], q[1]);
                    libm::hypot(k[0] - q[0], k[1] - q[1]) <= 1e-12 * scale
                })
                .map(|(_, a)| *a)
                .unwrap_or(Complex64::new(0.0, 0.0))
        };
        let mut f = [Complex64::new(0.0, 0.0); 2];
        for (q, h1) in l1 {
            let qn = libm::hypot(q[0], q[1]);
            if qn == 0.0 || h1 == Complex64::new(0.0, 0.0) {
                continue;
            }
            let minus = [-q[0], -q[1]];
            let bracket = h1 * find(&l2, minus) - find(&l1, minus) * find(&l2, q);
            if bracket == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (_, a_minus) = self.kernels_si(qn, 0.0, geometry.separation)?;
            let term = Complex64::i() * a_minus * bracket;
            f[0] += term * q[0];
            f[1] += term * q[1];
        }
        let pref = -0.5 * HBAR * C * geometry.area;
        Ok([pref * f[0].re, pref * f[1].re])
    }

    /// Force spectrum for plate 1 driven by `r_spectrum` on `omegas`, adding
    /// the static force in the zero-frequency bin. Bins with a nonzero drive
    /// at or above the resonance threshold are an error.
    pub fn force_spectrum(
        &self,
        c1: &CorrugationSpec,
        c2: Option<&CorrugationSpec>,
        geometry: &PlateGeometry,
        omegas: &[f64],
        r_spectrum: &[[Complex64; 2]],
    ) -> Result<Vec<[Complex64; 2]>> {
        if omegas.len() != r_spectrum.len() {
            return Err(Error::InvalidInput(
                "frequency grid and displacement spectrum differ in length",
            ));
        }
        let f0 = self.residual_force(c1, c2, geometry)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut tensors = Vec::with_capacity(omegas.len());
        for (&w, r) in omegas.iter().zip(r_spectrum) {
            if r[0] == zero && r[1] == zero {
                tensors.push(ResponseTensor::zero(w, c1.direction()));
            } else {
                tensors.push(self.response_tensor(c1, c2, geometry, w)?);
            }
        }
        compose_force_spectrum(&tensors, r_spectrum, f0)
    }
}

/// `f(w) = chi(w) r(w) + f0 [w = 0]`.
pub fn compose_force_spectrum(
    chi: &[ResponseTensor],
    r_spectrum: &[[Complex64; 2]],
    f0: [f64; 2],
) -> Result<Vec<[Complex64; 2]>> {
    if chi.len() != r_spectrum.len() {
        return Err(Error::InvalidInput(
            "response and displacement spectra differ in length",
        ));
    }
    Ok(chi
        .iter()
        .zip(r_spectrum)
        .map(|(x, r)| {
            let mut f = x.apply(*r);
            if x.omega == 0.0 {
                f[0] += f0[0];
                f[1] += f0[1];
            }
            f
        })
        .collect())
}
