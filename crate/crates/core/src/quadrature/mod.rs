//! Adaptive integration on finite and semi-infinite intervals, nested
//! radial-angular integration for isotropic three-dimensional integrals, and
//! limit extrapolation.
//!
//! An infinite upper limit is handled by the map `x = a + t / (1 - t)`, under
//! which exponentially decaying integrands stay smooth on `t in [0, 1)`.

mod extrapolate;
mod gauss_kronrod;
mod legendre;

pub use extrapolate::{
    extrapolate_limit, extrapolate_limit_rational, polynomial_interpolate, rational_interpolate, Extrapolation,
};
pub use legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Tolerances and budget for adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidInput("rel_tol must be positive and finite"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidInput("abs_tol must be nonnegative and finite"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidInput("max_subdivisions must be at least one"));
        }
        Ok(())
    }
}

/// Value of an integral with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl QuadratureResult {
    /// The value if converged, otherwise a non-convergence error.
    pub fn require(self, what: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                what,
                value: self.value,
                error_estimate: self.error_estimate,
            })
        }
    }
}

/// Upper integration limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinity,
}

impl From<f64> for Bound {
    fn from(b: f64) -> Self {
        if b == f64::INFINITY {
            Bound::Infinity
        } else {
            Bound::Finite(b)
        }
    }
}

fn check_limits(a: f64, b: Bound) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite("lower integration limit"));
    }
    if let Bound::Finite(b) = b {
        if !b.is_finite() {
            return Err(Error::NonFinite("upper integration limit"));
        }
        if b < a {
            return Err(Error::InvalidInput("upper limit below lower limit"));
        }
    }
    Ok(())
}

/// Integrate a vector integrand with error densities over `[a, b]`.
pub(crate) fn integrate_vec<const N: usize, F>(
    mut f: F,
    a: f64,
    b: Bound,
    spec: &QuadratureSpec,
    relative_to_abs: bool,
) -> [QuadratureResult; N]
where
    F: FnMut(f64) -> ([f64; N], [f64; N]),
{
    let run = match b {
        Bound::Finite(b) => gauss_kronrod::adaptive(&mut f, a, b, spec, relative_to_abs),
        Bound::Infinity => {
            let mut g = |t: f64| {
                let s = 1.0 - t;
                let jac = 1.0 / (s * s);
                let (v, e) = f(a + t / s);
                let mut vv = [0.0; N];
                let mut ee = [0.0; N];
                for i in 0..N {
                    vv[i] = if v[i] == 0.0 { 0.0 } else { v[i] * jac };
                    ee[i] = if e[i] == 0.0 { 0.0 } else { e[i] * jac };
                }
                (vv, ee)
            };
            gauss_kronrod::adaptive(&mut g, 0.0, 1.0, spec, relative_to_abs)
        }
    };
    let mut out = [QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        converged: false,
    }; N];
    for i in 0..N {
        out[i] = if run.finite {
            QuadratureResult {
                value: run.value[i],
                error_estimate: run.error[i],
                converged: run.converged[i],
            }
        } else {
            QuadratureResult {
                value: f64::NAN,
                error_estimate: f64::INFINITY,
                converged: false,
            }
        };
    }
    out
}

/// Adaptive integral of `f` over `[a, b]`, `b` possibly infinite.
///
/// Non-convergence within the budget yields `converged == false`; an
/// integrand returning NaN or infinity yields a NaN value, also unconverged.
pub fn integrate_1d<F, B>(mut f: F, a: f64, b: B, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
    B: Into<Bound>,
{
    spec.validate()?;
    let b = b.into();
    check_limits(a, b)?;
    let [r] = integrate_vec(|x| ([f(x)], [0.0]), a, b, spec, false);
    Ok(r)
}

/// Adaptive integral of `f` whose behaviour at `a` is `(x - a)^exponent`,
/// `exponent > -1`. The substitution `x = a + w u^(1/(1+exponent))` removes
/// the singularity on the first unit (or whole finite) interval.
pub fn integrate_1d_singular<F, B>(
    mut f: F,
    a: f64,
    b: B,
    exponent: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
    B: Into<Bound>,
{
    spec.validate()?;
    let b = b.into();
    check_limits(a, b)?;
    if !(exponent > -1.0 && exponent.is_finite()) {
        return Err(Error::InvalidInput("endpoint exponent must exceed -1"));
    }
    let (w, tail) = match b {
        Bound::Finite(b) => (b - a, None),
        Bound::Infinity => (1.0, Some(a + 1.0)),
    };
    let m = 1.0 / (1.0 + exponent);
    let head = {
        let mut g = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = a + w * libm::pow(u, m);
            w * m * libm::pow(u, m - 1.0) * f(x)
        };
        let [r] = integrate_vec(|u| ([g(u)], [0.0]), 0.0, Bound::Finite(1.0), spec, false);
        r
    };
    match tail {
        None => Ok(head),
        Some(start) => {
            let [t] = integrate_vec(|x| ([f(x)], [0.0]), start, Bound::Infinity, spec, false);
            let value = head.value + t.value;
            let error_estimate = head.error_estimate + t.error_estimate;
            let converged =
                head.converged && t.converged && error_estimate <= (spec.rel_tol * value.abs()).max(spec.abs_tol);
            Ok(QuadratureResult {
                value,
                error_estimate,
                converged,
            })
        }
    }
}

/// Vector form of [`integrate_radial_angular`] with `u = cos(theta)`:
/// integrates `p^2 f(p, u)` over `p in [0, p_max]`, `u in [-1, 1]`.
/// Inner errors are propagated into the outer estimate.
pub(crate) fn radial_angular_vec<const N: usize, F>(
    mut f: F,
    p_max: Bound,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> [QuadratureResult; N]
where
    F: FnMut(f64, f64) -> [f64; N],
{
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol * 0.25,
        abs_tol: spec.abs_tol,
        max_subdivisions: spec.max_subdivisions,
    };
    let mut inner_ok = true;
    let mut outer = |p: f64| {
        let inner = integrate_vec(|u| (f(p, u), [0.0; N]), -1.0, Bound::Finite(1.0), &inner_spec, true);
        let mut v = [0.0; N];
        let mut e = [0.0; N];
        for i in 0..N {
            inner_ok &= inner[i].converged;
            v[i] = p * p * inner[i].value;
            e[i] = p * p * inner[i].error_estimate;
        }
        (v, e)
    };

    // Pieces between consecutive breakpoints, the last one running to p_max.
    let mut cuts: alloc::vec::Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| {
            x > 0.0
                && match p_max {
                    Bound::Infinity => x.is_finite(),
                    Bound::Finite(m) => x < m,
                }
        })
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = [QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        converged: true,
    }; N];
    let mut lo = 0.0;
    let mut pieces = alloc::vec::Vec::with_capacity(cuts.len() + 1);
    for &c in &cuts {
        pieces.push((lo, Bound::Finite(c)));
        lo = c;
    }
    pieces.push((lo, p_max));
    for (a, b) in pieces {
        let r = integrate_vec(&mut outer, a, b, spec, false);
        for i in 0..N {
            total[i].value += r[i].value;
            total[i].error_estimate += r[i].error_estimate;
        }
    }
    for t in total.iter_mut() {
        let tol = (spec.rel_tol * t.value.abs()).max(spec.abs_tol);
        t.converged = inner_ok && t.value.is_finite() && t.error_estimate <= tol;
    }
    total
}

/// `int_0^inf p^2 dp int_0^pi sin(theta) dtheta f(p, theta)`.
pub fn integrate_radial_angular<F>(mut f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> f64,
{
    spec.validate()?;
    let [r] = radial_angular_vec(|p, u| [f(p, libm::acos(u))], Bound::Infinity, &[], spec);
    Ok(r)
}

/// Radial-angular integral on `p in [0, p_max]`, split at `breakpoints`
/// where the integrand has kinks.
pub fn integrate_radial_angular_on<F, B>(
    mut f: F,
    p_max: B,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> f64,
    B: Into<Bound>,
{
    spec.validate()?;
    let p_max = p_max.into();
    check_limits(0.0, p_max)?;
    let [r] = radial_angular_vec(|p, u| [f(p, libm::acos(u))], p_max, breakpoints, spec);
    Ok(r)
}
