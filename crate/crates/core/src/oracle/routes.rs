//! Integration routes that share no code with the kernel evaluator.
//!
//! The loop integral is rewritten over the triangle `|k - Q| <= s <= k + Q`:
//!
//! ```text
//! int d^3p/(2 pi)^3 F(p, |p + q|) = 1/(4 pi^2 Q) int_0^inf dk k int_{|k-Q|}^{k+Q} ds s F(k, s)
//! ```
//!
//! and integrated on fixed Gauss-Legendre panels, split at `k = Q` where the
//! lower limit kinks. Doubling every panel count gives a Richardson pair.

use core::f64::consts::PI;

use crate::quadrature::{integrate_1d, GaussLegendre, QuadratureSpec};
use crate::Result;

const ZETA5: f64 = 1.036_927_755_143_369_926_3;
const NODES: usize = 16;
/// Integrands decay at least as `e^{-k}`; beyond this the tail is below 1e-19.
const K_TAIL: f64 = 45.0;

fn bose(p: f64) -> f64 {
    if p < 1e-8 {
        1.0 + p
    } else {
        2.0 * p / (1.0 - libm::exp(-2.0 * p))
    }
}

/// `(T+, T-)` written directly from the loop expansion.
fn loop_terms(k: f64, s: f64) -> (f64, f64) {
    let (ek, es) = (libm::exp(-k), libm::exp(-s));
    let (nk, ns) = (bose(k), bose(s));
    let (mk, ms) = (-nk * ek, -ns * es);
    let (hk, hs) = (0.5 * ek, 0.5 * es);
    let reflected = nk * ek * ek;
    let plus = reflected * (s - k) / 4.0 + (2.0 * ms * mk * hs * hk + ns * nk * (hs * hs + hk * hk)) / 4.0;
    let minus = (ms * mk * (hs * hs + hk * hk) + 2.0 * ns * nk * hs * hk) / 4.0 - mk * s * es / 4.0;
    (plus, minus)
}

fn panels_for(width: f64, per_unit: f64, base: usize) -> usize {
    base + libm::ceil(width * per_unit) as usize
}

/// `(C+, A-)` at unit separation and `x = Q^2 > 0` with `refine` times the
/// base panel counts.
fn triangle(x: f64, refine: usize, rule: &GaussLegendre) -> (f64, f64) {
    let q = libm::sqrt(x);
    if q == 0.0 {
        return forward(refine, rule);
    }
    let mut acc = (0.0, 0.0);
    let outer = |k: f64| -> (f64, f64) {
        let lo = (k - q).abs();
        let hi = k + q;
        let n = panels_for(hi - lo, 1.0, 1) * refine;
        let mut sp = 0.0;
        let mut sm = 0.0;
        let w = (hi - lo) / n as f64;
        for j in 0..n {
            let a = lo + w * j as f64;
            let c = a + 0.5 * w;
            for (t, wt) in rule.nodes().iter().zip(rule.weights()) {
                let s = c + 0.5 * w * t;
                let (p, m) = loop_terms(k, s);
                sp += wt * s * p;
                sm += wt * s * m;
            }
        }
        (0.5 * w * sp * k, 0.5 * w * sm * k)
    };
    for (a, b, per_unit) in [(0.0, q, 2.0), (q, q + K_TAIL, 1.0)] {
        let n = panels_for(b - a, per_unit, 2) * refine;
        let w = (b - a) / n as f64;
        for j in 0..n {
            let c = a + w * (j as f64 + 0.5);
            for (t, wt) in rule.nodes().iter().zip(rule.weights()) {
                let (p, m) = outer(c + 0.5 * w * t);
                acc.0 += 0.5 * w * wt * p;
                acc.1 += 0.5 * w * wt * m;
            }
        }
    }
    let norm = 1.0 / (4.0 * PI * PI * q);
    let c_plus = -x * x * q / (720.0 * PI * PI) + 2.0 * norm * acc.0 + 3.0 * ZETA5 / (8.0 * PI * PI);
    (c_plus, 2.0 * norm * acc.1)
}

/// The `Q = 0` limit, where the triangle collapses to `s = k`:
/// `int_p F = 1/(2 pi^2) int dk k^2 F(k, k)`.
fn forward(refine: usize, rule: &GaussLegendre) -> (f64, f64) {
    let n = panels_for(K_TAIL, 1.0, 2) * refine;
    let plus = rule.integrate_panels(&mut |k| k * k * loop_terms(k, k).0, 0.0, K_TAIL, n);
    let minus = rule.integrate_panels(&mut |k| k * k * loop_terms(k, k).1, 0.0, K_TAIL, n);
    let norm = 1.0 / (2.0 * PI * PI);
    (2.0 * norm * plus + 3.0 * ZETA5 / (8.0 * PI * PI), 2.0 * norm * minus)
}

/// Fixed-panel kernels `(A+, A-)` at `Q^2 > 0`, separation `h`, with the
/// Richardson-corrected value and the coarse/fine difference as error.
pub fn fixed_panel_kernels(q2: f64, h: f64) -> ((f64, f64), f64) {
    let rule = GaussLegendre::new(NODES);
    let x = q2 * h * h;
    let coarse = triangle(x, 1, &rule);
    let fine = triangle(x, 2, &rule);
    // Error of a 16-point panel rule falls as the 32nd power of the width.
    let r = libm::pow(2.0, 32.0) - 1.0;
    let c = fine.0 + (fine.0 - coarse.0) / r;
    let m = fine.1 + (fine.1 - coarse.1) / r;
    let s = libm::pow(h, -5.0);
    let half_single = -q2 * q2 * libm::sqrt(q2) / (720.0 * PI * PI);
    let err = (fine.0 - coarse.0).abs().max((fine.1 - coarse.1).abs()) * s;
    ((c * s + half_single, m * s), err)
}

/// Unit-separation `C+` by the fixed-panel route.
pub fn fixed_panel_remainder(x: f64) -> f64 {
    let rule = GaussLegendre::new(NODES);
    let coarse = triangle(x, 1, &rule).0;
    let fine = triangle(x, 2, &rule).0;
    fine + (fine - coarse) / (libm::pow(2.0, 32.0) - 1.0)
}

/// Single-plate kernel from the angle-averaged momentum integral
/// `A = int_p p (|p + q| - p)` with power divergences dropped:
/// `1/(2 pi^2) [int_0^Q p^3 (Q + p^2/(3Q) - p) dp - Q^5/9]`.
pub fn single_plate_momentum(q2: f64, spec: &QuadratureSpec) -> Result<f64> {
    let q = libm::sqrt(q2);
    if q == 0.0 {
        return Ok(0.0);
    }
    let inner = integrate_1d(|p| p * p * p * (q + p * p / (3.0 * q) - p), 0.0, q, spec)?.require("momentum route")?;
    Ok((inner - q2 * q2 * q / 9.0) / (2.0 * PI * PI))
}

/// Single-plate kernel from the subtracted position-space transform
/// `A = (4/pi^3) Q^5 int_0^inf [sin x/x - 1 + x^2/6 - x^4/120] / x^6 dx`.
pub fn single_plate_position(q2: f64) -> f64 {
    const SPLIT: f64 = 0.5;
    const END: f64 = 200.0;
    let g = |x: f64| {
        if x < SPLIT {
            let x2 = x * x;
            // Taylor series of the subtracted sine, divided by x^6.
            -1.0 / 5040.0 + x2 / 362_880.0 - x2 * x2 / 39_916_800.0 + x2 * x2 * x2 / 6_227_020_800.0
                - x2 * x2 * x2 * x2 / 1_307_674_368_000.0
        } else {
            let x2 = x * x;
            (libm::sin(x) / x - 1.0 + x2 / 6.0 - x2 * x2 / 120.0) / (x2 * x2 * x2)
        }
    };
    let rule = GaussLegendre::new(NODES);
    let mut j = rule.integrate_panels(&mut |x| g(x), 0.0, SPLIT, 2);
    j += rule.integrate_panels(&mut |x| g(x), SPLIT, END, 800);
    // Tail of the polynomial part; the sine part is below 1e-16 there.
    j += -1.0 / (5.0 * libm::pow(END, 5.0)) + 1.0 / (18.0 * libm::pow(END, 3.0)) - 1.0 / (120.0 * END);
    4.0 / (PI * PI * PI) * q2 * q2 * libm::sqrt(q2) * j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_route_constant() {
        let a = single_plate_position(1.0);
        let exact = -1.0 / (360.0 * PI * PI);
        assert!(((a - exact) / exact).abs() < 1e-10, "{a} vs {exact}");
    }

    #[test]
    fn momentum_route_constant() {
        let a = single_plate_momentum(4.0, &QuadratureSpec::with_rel_tol(1e-12)).unwrap();
        let exact = -32.0 / (360.0 * PI * PI);
        assert!(((a - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn triangle_route_static_stiffness() {
        let (k, _) = fixed_panel_kernels(1e-6, 1.0);
        let target = PI * PI / 120.0;
        assert!(((k.0 - target) / target).abs() < 1e-6);
        assert!(((k.1 - target) / target).abs() < 1e-6);
    }
}
