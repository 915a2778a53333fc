//! Response kernels `A+` and `A-` and the region structure of the
//! `(q, omega)` plane.
//!
//! Kernels depend on `q` and `omega` only through `Q^2 = q^2 - omega^2/c^2`
//! and scale with the separation as `A(Q; H) = H^-5 A(QH; 1)`, so every
//! finite-`H` evaluation reduces to a loop integral at unit separation.
//! Lengths may be in any unit; kernels come out in that unit to the power -5.
//!
//! Regions: I is `Q^2 >= 0`; IIa is `-pi^2/H^2 <= Q^2 < 0`; IIb is the rest
//! and is empty for a single plate. In IIb both kernels are reported as
//! [`KernelValue::Divergent`].

mod continuation;
pub(crate) mod loop_integral;

pub use continuation::{ContinuationTable, Continued, LADDER_AGREEMENT, SAMPLE_REL_TOL};

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{extrapolate_limit, QuadratureSpec};
use crate::units::sgn;
use loop_integral::unit_remainders;

/// Relative wobble tolerated in the slope tableau; forward differences of
/// samples accurate to about 1e-12 cannot settle below this.
const SLOPE_NOISE: f64 = 1e-9;

/// Plate separation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Separation {
    Finite(f64),
    Infinite,
}

impl Separation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Separation::Finite(h) if !h.is_finite() => Err(Error::NonFinite("separation")),
            Separation::Finite(h) if h <= 0.0 => Err(Error::InvalidInput("separation must be positive")),
            _ => Ok(()),
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Separation::Finite(h) => Some(h),
            Separation::Infinite => None,
        }
    }
}

/// An evaluation site. `c` fixes the unit of `omega` relative to `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelPoint {
    pub q: f64,
    pub omega: f64,
    pub separation: Separation,
    pub c: f64,
}

impl KernelPoint {
    /// A point in natural units, `c = 1`.
    pub fn natural(q: f64, omega: f64, separation: Separation) -> Self {
        Self {
            q,
            omega,
            separation,
            c: 1.0,
        }
    }

    /// A point in SI units.
    pub fn si(q: f64, omega: f64, separation: Separation) -> Self {
        Self {
            q,
            omega,
            separation,
            c: crate::units::C,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.omega.is_finite() && self.c.is_finite()) {
            return Err(Error::NonFinite("kernel point"));
        }
        if self.q < 0.0 {
            return Err(Error::InvalidInput("wavenumber must be nonnegative"));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidInput("speed of light must be positive"));
        }
        self.separation.validate()
    }

    pub fn q2(&self) -> f64 {
        q2_combination(self)
    }
}

/// `Q^2 = q^2 - omega^2 / c^2`.
pub fn q2_combination(point: &KernelPoint) -> f64 {
    let w = point.omega / point.c;
    point.q * point.q - w * w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    I,
    IIa,
    IIb,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::I => "I",
            Region::IIa => "IIa",
            Region::IIb => "IIb",
        }
    }
}

/// `-(pi/H)^2`, the lower edge of region IIa.
fn boundary_q2(h: f64) -> f64 {
    let k = PI / h;
    -(k * k)
}

pub fn classify_region(point: &KernelPoint) -> Region {
    let q2 = q2_combination(point);
    if q2 >= 0.0 {
        return Region::I;
    }
    match point.separation {
        Separation::Infinite => Region::IIa,
        Separation::Finite(h) if q2 >= boundary_q2(h) => Region::IIa,
        Separation::Finite(_) => Region::IIb,
    }
}

/// Onset of region IIb, `c sqrt(q^2 + pi^2/H^2)`; `None` for a single plate.
pub fn resonance_threshold(q: f64, separation: Separation, c: f64) -> Option<f64> {
    separation.finite().map(|h| {
        let k = PI / h;
        c * libm::sqrt(q * q + k * k)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelValue {
    Finite { re: f64, im: f64 },
    Divergent,
}

impl KernelValue {
    pub fn real(re: f64) -> Self {
        KernelValue::Finite { re, im: 0.0 }
    }

    pub fn complex(&self) -> Option<Complex64> {
        match *self {
            KernelValue::Finite { re, im } => Some(Complex64::new(re, im)),
            KernelValue::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, KernelValue::Divergent)
    }

    fn scaled(self, s: f64) -> Self {
        match self {
            KernelValue::Finite { re, im } => KernelValue::Finite { re: re * s, im: im * s },
            KernelValue::Divergent => KernelValue::Divergent,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelPair {
    pub a_plus: KernelValue,
    pub a_minus: KernelValue,
}

/// Single-plate kernel `A+^inf` in closed form.
///
/// `-(c^2 q^2 - w^2)^(5/2) / (360 pi^2 c^5)` below the light cone and
/// `i sgn(w) (w^2 - c^2 q^2)^(5/2) / (360 pi^2 c^5)` above it.
pub fn a_plus_infinite(q: f64, omega: f64, c: f64) -> KernelValue {
    let w = omega / c;
    let q2 = q * q - w * w;
    let mag = libm::pow(q2.abs(), 2.5) / (360.0 * PI * PI);
    if q2 > 0.0 {
        KernelValue::real(-mag)
    } else if q2 < 0.0 {
        KernelValue::Finite {
            re: 0.0,
            im: sgn(omega) * mag,
        }
    } else {
        KernelValue::real(0.0)
    }
}

/// Free Euclidean propagator between planes, `e^{-p|dz|} / (2p)`.
pub fn surface_propagator(p: f64, dz: f64) -> Result<f64> {
    if p.is_nan() || dz.is_nan() {
        return Err(Error::NonFinite("propagator argument"));
    }
    if p == 0.0 {
        return Err(Error::SingularInput("surface propagator at zero momentum"));
    }
    if p < 0.0 {
        return Err(Error::InvalidInput("momentum magnitude must be positive"));
    }
    if dz.is_infinite() {
        return Ok(0.0);
    }
    Ok(libm::exp(-p * dz.abs()) / (2.0 * p))
}

/// Real kernels `(A+, A-)` at `Q^2 >= 0` using the default evaluator.
pub fn kernels_euclidean(q2: f64, separation: Separation, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    KernelEvaluator::new(*spec)?.euclidean(q2, separation)
}

/// Kernel pair at `point`. In region IIa this builds a continuation table on
/// every call; reuse a prepared [`KernelEvaluator`] for repeated work.
pub fn kernel_pair(point: &KernelPoint, spec: &QuadratureSpec) -> Result<KernelPair> {
    KernelEvaluator::new(*spec)?.pair(point)
}

/// Kernel evaluation with a fixed tolerance and an optional prepared
/// continuation table.
#[derive(Clone, Debug)]
pub struct KernelEvaluator {
    spec: QuadratureSpec,
    normalization: f64,
    table: Option<ContinuationTable>,
}

impl KernelEvaluator {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            normalization: 1.0,
            table: None,
        })
    }

    /// Sample the continuation ladders now so IIa evaluations are cheap.
    pub fn with_continuation(mut self) -> Result<Self> {
        if self.table.is_none() {
            self.table = Some(ContinuationTable::build(&self.spec)?);
        }
        Ok(self)
    }

    /// Overall factor on every kernel. Exists only so tests can verify that
    /// the oracle suite detects a mis-normalized loop integral.
    #[doc(hidden)]
    pub fn with_normalization(mut self, factor: f64) -> Self {
        self.normalization = factor;
        self
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn table(&self) -> Option<&ContinuationTable> {
        self.table.as_ref()
    }

    /// `(C+, A-)` at unit separation for `x = Q^2 H^2 >= 0`.
    pub fn unit_remainders(&self, x: f64) -> Result<[f64; 2]> {
        let [c, a] = unit_remainders(x, &self.spec)?;
        Ok([c * self.normalization, a * self.normalization])
    }

    /// Real kernels at `Q^2 >= 0`.
    pub fn euclidean(&self, q2: f64, separation: Separation) -> Result<(f64, f64)> {
        separation.validate()?;
        if !(q2 >= 0.0 && q2.is_finite()) {
            return Err(Error::InvalidInput("Euclidean kernels need finite Q^2 >= 0"));
        }
        let big_q = libm::sqrt(q2);
        let half_single = -q2 * q2 * big_q / (720.0 * PI * PI) * self.normalization;
        match separation {
            Separation::Infinite => Ok((2.0 * half_single, 0.0)),
            Separation::Finite(h) => {
                let [c, a] = self.unit_remainders(q2 * h * h)?;
                let s = libm::pow(h, -5.0);
                Ok((c * s + half_single, a * s))
            }
        }
    }

    /// Both kernels at `point`, classified by region.
    pub fn pair(&self, point: &KernelPoint) -> Result<KernelPair> {
        point.validate()?;
        let q2 = q2_combination(point);
        let single = a_plus_infinite(point.q, point.omega, point.c).scaled(self.normalization);
        let h = match point.separation {
            Separation::Infinite => {
                return Ok(KernelPair {
                    a_plus: single,
                    a_minus: KernelValue::real(0.0),
                })
            }
            Separation::Finite(h) => h,
        };
        match classify_region(point) {
            Region::I => {
                let (ap, am) = self.euclidean(q2, point.separation)?;
                Ok(KernelPair {
                    a_plus: KernelValue::real(ap),
                    a_minus: KernelValue::real(am),
                })
            }
            Region::IIa => {
                let x = (q2 * h * h).max(continuation::DEEPEST);
                let built;
                let table = match &self.table {
                    Some(t) => t,
                    None => {
                        built = ContinuationTable::build(&self.spec)?;
                        &built
                    }
                };
                let s = libm::pow(h, -5.0) * self.normalization;
                let c = table.continue_to(x, 0)?.value * s;
                let a = table.continue_to(x, 1)?.value * s;
                let im = match single {
                    KernelValue::Finite { im, .. } => 0.5 * im,
                    KernelValue::Divergent => unreachable!("closed form is finite"),
                };
                Ok(KernelPair {
                    a_plus: KernelValue::Finite { re: c, im },
                    a_minus: KernelValue::real(a),
                })
            }
            Region::IIb => Ok(KernelPair {
                a_plus: KernelValue::Divergent,
                a_minus: KernelValue::Divergent,
            }),
        }
    }

    /// `dA+/dQ^2` at `Q^2 >= 0`: Richardson-extrapolated forward differences
    /// of the analytic remainder plus the exact single-plate slope.
    pub fn a_plus_slope(&self, q2: f64, separation: Separation) -> Result<f64> {
        separation.validate()?;
        if !(q2 >= 0.0 && q2.is_finite()) {
            return Err(Error::InvalidInput("slope needs finite Q^2 >= 0"));
        }
        let half_single = -libm::pow(q2, 1.5) / (288.0 * PI * PI) * self.normalization;
        let h = match separation {
            Separation::Infinite => return Ok(2.0 * half_single),
            Separation::Finite(h) => h,
        };
        let x = q2 * h * h;
        let (c0, _) = self.remainder_plus(x)?;
        let h0 = 0.1 * (x + 1.0);
        let mut samples = [(0.0, 0.0); 6];
        for (j, s) in samples.iter_mut().enumerate() {
            let step = h0 / libm::pow(2.0, j as f64);
            let (c1, _) = self.remainder_plus(x + step)?;
            *s = (step, (c1 - c0) / step);
        }
        // Below the sample noise the tableau may wobble without diverging.
        let slope = match extrapolate_limit(&samples, 5) {
            Ok(e) => e.value,
            Err(Error::ExtrapolationFailed { value, error_estimate })
                if error_estimate <= SLOPE_NOISE * value.abs() =>
            {
                value
            }
            Err(e) => return Err(e),
        };
        Ok(slope * libm::pow(h, -3.0) + half_single)
    }

    /// Remainders at the sample tolerance, for use inside differences.
    fn remainder_plus(&self, x: f64) -> Result<(f64, f64)> {
        let tight = QuadratureSpec {
            rel_tol: self.spec.rel_tol.min(SAMPLE_REL_TOL),
            abs_tol: 0.0,
            ..self.spec
        };
        let [c, a] = unit_remainders(x, &tight)?;
        Ok((c * self.normalization, a * self.normalization))
    }
}

#[cfg(test)]
mod tests;
