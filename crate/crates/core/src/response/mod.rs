//! Observables built from the kernels, in SI units.
//!
//! A plate corrugated as `h(x) = d cos(k.x + alpha)` and displaced laterally
//! by `r(t)` feels a force `f(omega) = chi(omega) r(omega) + f0`. For cosine
//! profiles the response collapses onto the wave vector:
//!
//! ```text
//! chi_ij = hbar c A k_i k_j { d1^2/2 [A+(k, w) - A+(k, 0)] + d1 d2/2 A-(k, 0) cos(alpha2 - alpha1) }
//! ```
//!
//! The low-frequency limit `chi = dm w^2` defines the mass correction and the
//! dissipative part `Im chi = w eta` the viscosity; `eta >= 0`.

mod action;
mod capillary;
mod forces;

pub use action::{LineSpectrum, SpectralLine};
pub use capillary::{capillary_corrections, CapillaryCorrections};
pub use forces::{compose_force_spectrum, JosephsonCoupling, MAX_SPEED_FRACTION};

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{resonance_threshold, KernelEvaluator, KernelPoint, Separation};
use crate::quadrature::QuadratureSpec;
use crate::units::{C, HBAR};

/// Two-plate small-`kH` mass coefficient as quoted for the two-plate limit.
pub const QUOTED_B: f64 = -0.453;

/// Low-frequency label applies below this fraction of `ck`.
pub const LOW_FREQUENCY_LIMIT: f64 = 0.1;
/// Dissipative asymptote applies above this multiple of `ck`.
pub const DISSIPATIVE_LIMIT: f64 = 10.0;

/// One plate's cosine corrugation `d cos(k.x + alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrugationSpec {
    pub amplitude: f64,
    pub wavevector: [f64; 2],
    pub phase: f64,
}

impl CorrugationSpec {
    pub fn new(amplitude: f64, wavevector: [f64; 2], phase: f64) -> Result<Self> {
        let c = Self {
            amplitude,
            wavevector,
            phase,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.wavevector.iter().all(|k| k.is_finite()) && self.phase.is_finite()) {
            return Err(Error::NonFinite("corrugation parameter"));
        }
        if self.amplitude < 0.0 {
            return Err(Error::InvalidInput("corrugation amplitude must be nonnegative"));
        }
        if self.amplitude > 0.0 && self.wavenumber() == 0.0 {
            return Err(Error::InvalidInput("a corrugated plate needs a nonzero wave vector"));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        libm::hypot(self.wavevector[0], self.wavevector[1])
    }

    /// Unit vector along `k`, or the x axis for a flat plate.
    pub fn direction(&self) -> [f64; 2] {
        let k = self.wavenumber();
        if k == 0.0 {
            [1.0, 0.0]
        } else {
            [self.wavevector[0] / k, self.wavevector[1] / k]
        }
    }

    pub fn height(&self, x: [f64; 2]) -> f64 {
        self.amplitude * libm::cos(self.wavevector[0] * x[0] + self.wavevector[1] * x[1] + self.phase)
    }

    fn same_wavevector(&self, other: &CorrugationSpec) -> bool {
        let dk = libm::hypot(
            self.wavevector[0] - other.wavevector[0],
            self.wavevector[1] - other.wavevector[1],
        );
        dk <= 1e-12 * self.wavenumber().max(other.wavenumber())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateGeometry {
    pub area: f64,
    pub separation: Separation,
}

impl PlateGeometry {
    pub fn new(area: f64, separation: Separation) -> Result<Self> {
        let g = Self { area, separation };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.area.is_finite() {
            return Err(Error::NonFinite("plate area"));
        }
        if self.area <= 0.0 {
            return Err(Error::InvalidInput("plate area must be positive"));
        }
        self.separation.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialSpec {
    pub density: f64,
    pub thickness: f64,
    pub surface_tension: Option<f64>,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.density) || !ok(self.thickness) || self.surface_tension.is_some_and(|s| !ok(s)) {
            return Err(Error::InvalidInput("material parameters must be positive and finite"));
        }
        Ok(())
    }

    /// Mass of a plate of the given area.
    pub fn plate_mass(&self, area: f64) -> f64 {
        self.density * self.thickness * area
    }
}

/// Frequency window in which a result is quoted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    LowFrequency,
    Intermediate,
    Dissipative,
}

impl Regime {
    pub fn of(omega: f64, k: f64) -> Self {
        let ck = C * k;
        let w = omega.abs();
        if w < LOW_FREQUENCY_LIMIT * ck {
            Regime::LowFrequency
        } else if w > DISSIPATIVE_LIMIT * ck {
            Regime::Dissipative
        } else {
            Regime::Intermediate
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::LowFrequency => "low_frequency",
            Regime::Intermediate => "intermediate",
            Regime::Dissipative => "dissipative",
        }
    }
}

/// Mass corrections (kg) and viscosities (kg/s) along and across `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassViscosity {
    pub dm_par: f64,
    pub dm_perp: f64,
    pub eta_par: f64,
    pub eta_perp: f64,
    pub regime: Regime,
}

/// Lateral response `chi_ij(omega)` in N/m.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponseTensor {
    pub omega: f64,
    pub direction: [f64; 2],
    pub parallel: Complex64,
    pub perpendicular: Complex64,
}

impl ResponseTensor {
    pub fn zero(omega: f64, direction: [f64; 2]) -> Self {
        Self {
            omega,
            direction,
            parallel: Complex64::new(0.0, 0.0),
            perpendicular: Complex64::new(0.0, 0.0),
        }
    }

    /// `chi_par k^ k^ + chi_perp (1 - k^ k^)`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let n = self.direction;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let proj = n[i] * n[j];
                let id = if i == j { 1.0 } else { 0.0 };
                *v = self.parallel * proj + self.perpendicular * (id - proj);
            }
        }
        m
    }

    pub fn apply(&self, r: [Complex64; 2]) -> [Complex64; 2] {
        let m = self.matrix();
        [m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1]]
    }

    /// Viscosity `Im chi / omega`.
    pub fn viscosity(&self) -> (f64, f64) {
        if self.omega == 0.0 {
            (0.0, 0.0)
        } else {
            (self.parallel.im / self.omega, self.perpendicular.im / self.omega)
        }
    }
}

/// Single-plate mass correction `A hbar k^5 d^2 / (288 pi^2 c)`.
pub fn mass_correction_single(c: &CorrugationSpec, area: f64) -> MassViscosity {
    let k = c.wavenumber();
    let d = c.amplitude;
    MassViscosity {
        dm_par: area * HBAR * libm::pow(k, 5.0) * d * d / (288.0 * PI * PI * C),
        dm_perp: 0.0,
        eta_par: 0.0,
        eta_perp: 0.0,
        regime: Regime::LowFrequency,
    }
}

/// Two-plate small-`kH` mass correction `hbar A B k^2 d^2 / (48 c H^3)` with
/// the quoted `B`. Zero for a single plate.
pub fn mass_correction_two_plate(c: &CorrugationSpec, area: f64, separation: Separation) -> MassViscosity {
    let dm = match separation {
        Separation::Finite(h) => {
            let k = c.wavenumber();
            let d = c.amplitude;
            HBAR * area * QUOTED_B * k * k * d * d / (48.0 * C * h * h * h)
        }
        Separation::Infinite => 0.0,
    };
    MassViscosity {
        dm_par: dm,
        dm_perp: 0.0,
        eta_par: 0.0,
        eta_perp: 0.0,
        regime: Regime::LowFrequency,
    }
}

/// Ratio of the two-plate closed form to the single-plate one,
/// `6 pi^2 B / (kH)^3`.
pub fn two_plate_enhancement(kh: f64) -> f64 {
    6.0 * PI * PI * QUOTED_B / (kh * kh * kh)
}

/// Single-plate viscosity from the closed-form kernel at any frequency,
/// `hbar A d^2 k^2 (w^2 - c^2 k^2)^(5/2) / (720 pi^2 c^4 w)` above the light
/// cone and zero below it.
pub fn shear_viscosity(c: &CorrugationSpec, area: f64, omega: f64) -> MassViscosity {
    let k = c.wavenumber();
    let d = c.amplitude;
    let w = omega.abs();
    let excess = w * w - C * C * k * k;
    let eta = if excess > 0.0 && d > 0.0 {
        HBAR * area * d * d * k * k * libm::pow(excess, 2.5) / (720.0 * PI * PI * libm::pow(C, 4.0) * w)
    } else {
        0.0
    };
    MassViscosity {
        dm_par: 0.0,
        dm_perp: 0.0,
        eta_par: eta,
        eta_perp: 0.0,
        regime: Regime::of(omega, k),
    }
}

/// High-frequency asymptote `hbar A k^2 d^2 w^4 / (720 pi^2 c^4)`.
pub fn shear_viscosity_asymptotic(c: &CorrugationSpec, area: f64, omega: f64) -> f64 {
    let k = c.wavenumber();
    let d = c.amplitude;
    HBAR * area * k * k * d * d * libm::pow(omega, 4.0) / (720.0 * PI * PI * libm::pow(C, 4.0))
}

/// Ringdown time `2M / eta`; infinite without dissipation.
pub fn decay_time(mass: f64, eta: f64) -> Result<f64> {
    if !(mass.is_finite() && eta.is_finite()) {
        return Err(Error::NonFinite("decay time input"));
    }
    if eta < 0.0 || mass < 0.0 {
        return Err(Error::InvalidInput("mass and viscosity must be nonnegative"));
    }
    if eta == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * mass / eta)
}

/// Kernel-backed observables that need numerical evaluation.
#[derive(Clone, Debug)]
pub struct ResponseModel {
    eval: KernelEvaluator,
}

impl ResponseModel {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        Ok(Self {
            eval: KernelEvaluator::new(spec)?,
        })
    }

    pub fn from_evaluator(eval: KernelEvaluator) -> Self {
        Self { eval }
    }

    /// Prepare the continuation table for repeated region-IIa evaluations.
    pub fn with_continuation(self) -> Result<Self> {
        Ok(Self {
            eval: self.eval.with_continuation()?,
        })
    }

    pub fn evaluator(&self) -> &KernelEvaluator {
        &self.eval
    }

    /// Kernels at an SI point; region IIb is an error naming the point.
    pub(crate) fn kernels_si(&self, q: f64, omega: f64, separation: Separation) -> Result<(Complex64, Complex64)> {
        let pair = self.eval.pair(&KernelPoint::si(q, omega, separation))?;
        match (pair.a_plus.complex(), pair.a_minus.complex()) {
            (Some(p), Some(m)) => Ok((p, m)),
            _ => Err(Error::DivergentResponse {
                omega,
                threshold: resonance_threshold(q, separation, C).unwrap_or(f64::INFINITY),
            }),
        }
    }

    fn check_threshold(k: f64, separation: Separation, omega: f64) -> Result<()> {
        if let Some(thr) = resonance_threshold(k, separation, C) {
            if omega.abs() >= thr {
                return Err(Error::DivergentResponse { omega, threshold: thr });
            }
        }
        Ok(())
    }

    /// `chi_ij(omega)` for plate 1 moving, optionally facing plate 2.
    pub fn response_tensor(
        &self,
        c1: &CorrugationSpec,
        c2: Option<&CorrugationSpec>,
        geometry: &PlateGeometry,
        omega: f64,
    ) -> Result<ResponseTensor> {
        c1.validate()?;
        if let Some(c2) = c2 {
            c2.validate()?;
        }
        geometry.validate()?;
        if !omega.is_finite() {
            return Err(Error::NonFinite("frequency"));
        }
        let k = c1.wavenumber();
        Self::check_threshold(k, geometry.separation, omega)?;
        let mut out = ResponseTensor::zero(omega, c1.direction());
        if c1.amplitude == 0.0 {
            return Ok(out);
        }
        let d1 = c1.amplitude;
        let pref = HBAR * C * geometry.area * k * k;

        let self_term = if omega == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let (a_w, _) = self.kernels_si(k, omega, geometry.separation)?;
            let (a_0, _) = self.kernels_si(k, 0.0, geometry.separation)?;
            (a_w - a_0) * (0.5 * d1 * d1)
        };

        let cross = match (c2, geometry.separation) {
            (Some(c2), Separation::Finite(_)) if c2.amplitude > 0.0 && c1.same_wavevector(c2) => {
                let (_, a_minus) = self.kernels_si(k, 0.0, geometry.separation)?;
                a_minus * (0.5 * d1 * c2.amplitude * libm::cos(c2.phase - c1.phase))
            }
            _ => Complex64::new(0.0, 0.0),
        };
        out.parallel = (self_term + cross) * pref;
        Ok(out)
    }

    /// Low-frequency mass correction at any `kH` from the slope of `A+` in
    /// `Q^2`: `dm = -hbar A k^2 d^2/2 dA+/dQ^2 / c`.
    pub fn mass_correction_kernel(&self, c: &CorrugationSpec, geometry: &PlateGeometry) -> Result<MassViscosity> {
        c.validate()?;
        geometry.validate()?;
        let k = c.wavenumber();
        let d = c.amplitude;
        let dm = if d == 0.0 {
            0.0
        } else {
            let slope = self.eval.a_plus_slope(k * k, geometry.separation)?;
            -HBAR * geometry.area * k * k * 0.5 * d * d * slope / C
        };
        Ok(MassViscosity {
            dm_par: dm,
            dm_perp: 0.0,
            eta_par: 0.0,
            eta_perp: 0.0,
            regime: Regime::LowFrequency,
        })
    }

    /// Viscosity from the full response tensor at `omega`; for two plates in
    /// region IIa this is independent of the separation.
    pub fn shear_viscosity(&self, c: &CorrugationSpec, geometry: &PlateGeometry, omega: f64) -> Result<MassViscosity> {
        let chi = self.response_tensor(c, None, geometry, omega)?;
        let (eta_par, eta_perp) = chi.viscosity();
        Ok(MassViscosity {
            dm_par: 0.0,
            dm_perp: 0.0,
            eta_par,
            eta_perp,
            regime: Regime::of(omega, c.wavenumber()),
        })
    }

    /// Coefficient `B` of the small-`kH` two-plate mass, extracted from the
    /// `Q^2` slope of `A+` at `Q = 0`: `B = -48 H^3 dA+/dQ^2`.
    pub fn two_plate_coefficient(&self) -> Result<f64> {
        Ok(-48.0 * self.eval.a_plus_slope(0.0, Separation::Finite(1.0))?)
    }

    /// The `kH` at which the low-frequency mass correction changes sign.
    pub fn mass_crossover_kh(&self) -> Result<f64> {
        let slope = |kh: f64| self.eval.a_plus_slope(kh * kh, Separation::Finite(1.0));
        let (mut lo, mut hi) = (0.2, 6.0);
        let (s_lo, s_hi) = (slope(lo)?, slope(hi)?);
        if s_lo.signum() == s_hi.signum() {
            return Err(Error::InvalidInput(
                "mass correction does not change sign on the search bracket",
            ));
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let s = slope(mid)?;
            if s.signum() == s_lo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-9 * mid {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
