//! Second-order loop integrals at unit plate separation.
//!
//! With `n(p) = 2p / (1 - e^{-2p})`, `n_r(p) = n(p) e^{-2p}`,
//! `m(p) = -n(p) e^{-p}`, `E(p) = e^{-p} / 2` and `s = |p + q|`, the kernels
//! at separation one are
//!
//! ```text
//! A+ = -Q^5/(360 pi^2) + 2 int_p T+(p, s) + 3 zeta(5)/(8 pi^2)
//! A- = 2 int_p T-(p, s)
//! T+ = n_r(p)(s - p)/4 + [2 m(s) m(p) E(s) E(p) + n(s) n(p) (E(s)^2 + E(p)^2)]/4
//! T- = [m(s) m(p) (E(s)^2 + E(p)^2) + 2 n(s) n(p) E(s) E(p)]/4 - m(p) s e^{-s}/4
//! ```
//!
//! where `int_p` is `int d^3p / (2 pi)^3`. Power divergences are dropped, so
//! only finite parts remain; the `-Q^5/(360 pi^2)` piece is the only term
//! non-analytic in `Q^2`, and half of it is the single-plate kernel.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{radial_angular_vec, Bound, QuadratureSpec};

pub(crate) const ZETA5: f64 = 1.036_927_755_143_369_926_3;

/// Constant left over from the finite part of the uniform-plate loop.
pub(crate) const LOOP_CONSTANT: f64 = 3.0 * ZETA5 / (8.0 * PI * PI);

/// `1 / (2 pi)^3` times the solid angle factor `2 pi` of the azimuth.
const MEASURE: f64 = 1.0 / (4.0 * PI * PI);

/// Per-momentum factors `(n, m, E)` and `e^{-p}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mode {
    pub n: f64,
    pub m: f64,
    pub e: f64,
    pub decay: f64,
}

impl Mode {
    pub fn new(p: f64) -> Self {
        let decay = libm::exp(-p);
        let n = if p == 0.0 {
            1.0
        } else {
            2.0 * p / -libm::expm1(-2.0 * p)
        };
        Self {
            n,
            m: -n * decay,
            e: 0.5 * decay,
            decay,
        }
    }

    /// `n_r = n e^{-2p}`.
    pub fn n_r(&self) -> f64 {
        self.n * self.decay * self.decay
    }
}

/// Integrands `(T+, T-)` for loop momentum `p` and shifted momentum `s`.
pub(crate) fn integrand(p: f64, s: f64, mp: &Mode, ms: &Mode) -> [f64; 2] {
    let e2 = ms.e * ms.e + mp.e * mp.e;
    let cross = ms.e * mp.e;
    let t_plus = 0.25 * mp.n_r() * (s - p) + 0.25 * (2.0 * ms.m * mp.m * cross + ms.n * mp.n * e2);
    let t_minus = 0.25 * (ms.m * mp.m * e2 + 2.0 * ms.n * mp.n * cross) - 0.25 * mp.m * s * ms.decay;
    [t_plus, t_minus]
}

/// `|p + q|` for `|q| = big_q` at `cos(theta) = u`, written to avoid
/// cancellation near `p = Q, u = -1`.
pub(crate) fn shifted(p: f64, big_q: f64, u: f64) -> f64 {
    let d = p - big_q;
    libm::sqrt((d * d + 2.0 * p * big_q * (1.0 + u)).max(0.0))
}

/// Analytic remainders `(C+, A-)` at unit separation, `C+ = A+ + Q^5/(720 pi^2)`,
/// as functions of `x = Q^2 >= 0`.
pub(crate) fn unit_remainders(x: f64, spec: &QuadratureSpec) -> Result<[f64; 2]> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput("unit-separation kernels need finite Q^2 >= 0"));
    }
    let big_q = libm::sqrt(x);
    let mut last_p = f64::NAN;
    let mut mp = Mode::new(0.0);
    let f = |p: f64, u: f64| {
        if p != last_p {
            mp = Mode::new(p);
            last_p = p;
        }
        let s = shifted(p, big_q, u);
        let ms = Mode::new(s);
        integrand(p, s, &mp, &ms)
    };
    let breaks = [big_q];
    let scaled = QuadratureSpec {
        // The integrals are O(1e-2); the absolute floor keeps tiny pieces cheap.
        abs_tol: spec.abs_tol * 2.0 * PI * PI,
        ..*spec
    };
    let [tp, tm] = radial_angular_vec(f, Bound::Infinity, &breaks, &scaled);
    let tp_v = tp.require("A+ loop integral")?;
    let tm_v = tm.require("A- loop integral")?;
    let q5 = x * x * big_q;
    let c_plus = -q5 / (720.0 * PI * PI) + 2.0 * MEASURE * tp_v + LOOP_CONSTANT;
    let a_minus = 2.0 * MEASURE * tm_v;
    Ok([c_plus, a_minus])
}
