//! Second-order effective action for deformations in a periodic box.
//!
//! A deformation `h(x, t) = sum_j c_j e^{i(q_j.x - w_j t)}` on a box of area
//! `A` and duration `T` contributes
//!
//! ```text
//! S = hbar c/2 A T sum_j { A+(q_j, w_j) (|c1_j|^2 + |c2_j|^2)
//!                          - A-(q_j, w_j) [c1_j c2(-j) + c1(-j) c2_j] }
//! ```
//!
//! where `(-j)` is the line at `(-q_j, -w_j)`. Real deformations carry both
//! lines, and the action is then real: the odd imaginary part of `A+` cancels.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{PlateGeometry, ResponseModel};
use crate::error::{Error, Result};
use crate::units::{C, HBAR};

/// One Fourier line: wave vector (1/m), frequency (rad/s), amplitude (m).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralLine {
    pub q: [f64; 2],
    pub omega: f64,
    pub amplitude: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LineSpectrum {
    pub lines: Vec<SpectralLine>,
}

impl LineSpectrum {
    pub fn new(lines: Vec<SpectralLine>) -> Self {
        Self { lines }
    }

    /// Amplitude at `(q, omega)`, zero when absent.
    pub fn amplitude(&self, q: [f64; 2], omega: f64) -> Complex64 {
        self.lines
            .iter()
            .filter(|l| same_site(l.q, l.omega, q, omega))
            .map(|l| l.amplitude)
            .sum()
    }

    /// The real field `h(x, t)` at a point.
    pub fn field(&self, x: [f64; 2], t: f64) -> f64 {
        self.lines
            .iter()
            .map(|l| (l.amplitude * Complex64::from_polar(1.0, l.q[0] * x[0] + l.q[1] * x[1] - l.omega * t)).re)
            .sum()
    }
}

fn same_site(q1: [f64; 2], w1: f64, q2: [f64; 2], w2: f64) -> bool {
    let scale = libm::hypot(q1[0], q1[1]).max(libm::hypot(q2[0], q2[1]));
    let wscale = w1.abs().max(w2.abs());
    libm::hypot(q1[0] - q2[0], q1[1] - q2[1]) <= 1e-12 * scale && (w1 - w2).abs() <= 1e-12 * wscale
}

impl ResponseModel {
    /// Action (J s) of two plate deformations over a box of duration `duration`.
    pub fn effective_action(
        &self,
        h1: &LineSpectrum,
        h2: &LineSpectrum,
        geometry: &PlateGeometry,
        duration: f64,
    ) -> Result<Complex64> {
        geometry.validate()?;
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidInput("box duration must be positive"));
        }
        let mut sites: Vec<([f64; 2], f64)> = Vec::new();
        for l in h1.lines.iter().chain(&h2.lines) {
            if !(l.q.iter().all(|x| x.is_finite()) && l.omega.is_finite()) {
                return Err(Error::NonFinite("spectral line"));
            }
            if !sites.iter().any(|s| same_site(s.0, s.1, l.q, l.omega)) {
                sites.push((l.q, l.omega));
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (q, w) in sites {
            let c1 = h1.amplitude(q, w);
            let c2 = h2.amplitude(q, w);
            let mq = [-q[0], -q[1]];
            let c1m = h1.amplitude(mq, -w);
            let c2m = h2.amplitude(mq, -w);
            let zero = Complex64::new(0.0, 0.0);
            if c1 == zero && c2 == zero {
                continue;
            }
            let (a_plus, a_minus) = self.kernels_si(libm::hypot(q[0], q[1]), w, geometry.separation)?;
            total += a_plus * (c1.norm_sqr() + c2.norm_sqr()) - a_minus * (c1 * c2m + c1m * c2);
        }
        Ok(total * (0.5 * HBAR * C * geometry.area * duration))
    }
}
