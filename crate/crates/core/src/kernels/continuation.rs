//! Continuation of the analytic kernel remainders from `Q^2 > 0` into
//! `Q^2 < 0`.
//!
//! At unit separation the remainders `C+(x)` and `A-(x)`, `x = Q^2 H^2`, are
//! analytic in `x` down to about `-4 pi^2`. Each is sampled on two disjoint
//! Chebyshev ladders in `x > 0` and continued by diagonal rational
//! interpolation; the two ladders must agree.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::loop_integral::unit_remainders;
use crate::error::{Error, Result};
use crate::quadrature::{rational_interpolate, QuadratureSpec};

/// Ladder layout: `(nodes, lower, upper)` in `x`.
const LADDERS: [(usize, f64, f64); 2] = [(14, 0.0, 40.0), (15, 0.03, 41.3)];

/// Relative agreement demanded between ladders.
pub const LADDER_AGREEMENT: f64 = 1e-6;

/// Samples are taken at this tolerance or tighter; the rational continuation
/// amplifies sample noise by several orders of magnitude.
pub const SAMPLE_REL_TOL: f64 = 1e-12;

/// Deepest continuation target, `x = -pi^2`.
pub const DEEPEST: f64 = -PI * PI;

/// One continued value with the spread between ladders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Continued {
    pub value: f64,
    pub other: f64,
}

impl Continued {
    pub fn spread(&self) -> f64 {
        (self.value - self.other).abs()
    }
}

/// Remainder samples at unit separation on both ladders.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationTable {
    ladders: [Vec<(f64, [f64; 2])>; 2],
}

fn chebyshev_nodes(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        let t = libm::cos(PI * (i as f64 + 0.5) / n as f64);
        0.5 * (lo + hi) + 0.5 * (hi - lo) * t
    })
}

impl ContinuationTable {
    /// Sample both ladders. Cost: 29 loop integrals.
    pub fn build(spec: &QuadratureSpec) -> Result<Self> {
        let tight = QuadratureSpec {
            rel_tol: spec.rel_tol.min(SAMPLE_REL_TOL),
            abs_tol: 0.0,
            max_subdivisions: spec.max_subdivisions.max(2000),
        };
        let mut ladders: [Vec<(f64, [f64; 2])>; 2] = [Vec::new(), Vec::new()];
        for (slot, &(n, lo, hi)) in ladders.iter_mut().zip(LADDERS.iter()) {
            for x in chebyshev_nodes(n, lo, hi) {
                slot.push((x, unit_remainders(x, &tight)?));
            }
        }
        Ok(Self { ladders })
    }

    /// Continue component `which` (0 for `C+`, 1 for `A-`) to `x`.
    pub fn continue_to(&self, x: f64, which: usize) -> Result<Continued> {
        if !(x >= DEEPEST && x.is_finite()) {
            return Err(Error::InvalidInput("continuation target below the resonance boundary"));
        }
        let mut vals = [0.0; 2];
        for (v, ladder) in vals.iter_mut().zip(self.ladders.iter()) {
            let pts: Vec<(f64, f64)> = ladder.iter().map(|(x, c)| (*x, c[which])).collect();
            *v = rational_interpolate(&pts, x)?.0;
        }
        let c = Continued {
            value: vals[0],
            other: vals[1],
        };
        let scale = vals[0].abs().max(vals[1].abs()).max(1e-3 * PI * PI / 120.0);
        if !(c.spread() <= LADDER_AGREEMENT * scale) {
            return Err(Error::ContinuationMismatch {
                q2: x,
                first: vals[0],
                second: vals[1],
            });
        }
        Ok(c)
    }
}
