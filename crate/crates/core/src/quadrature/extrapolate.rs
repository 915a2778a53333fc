//! Polynomial (Neville) and diagonal rational (Bulirsch-Stoer) interpolation,
//! and limit extrapolation built on them.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A limit estimate with the difference between the last two orders as error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub error_estimate: f64,
}

/// Neville interpolation through `(x, y)` evaluated at `x`. Returns the value
/// and the last correction applied.
pub fn polynomial_interpolate(samples: &[(f64, f64)], x: f64) -> (f64, f64) {
    let n = samples.len();
    assert!(n > 0, "interpolation needs samples");
    let mut c: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut d = c.clone();
    let mut ns = 0;
    let mut dif = (x - samples[0].0).abs();
    for (i, s) in samples.iter().enumerate() {
        let dift = (x - s.0).abs();
        if dift < dif {
            ns = i;
            dif = dift;
        }
    }
    let mut y = samples[ns].1;
    let mut dy = 0.0;
    let mut ns = ns as isize - 1;
    for m in 1..n {
        for i in 0..n - m {
            let ho = samples[i].0 - x;
            let hp = samples[i + m].0 - x;
            let w = c[i + 1] - d[i];
            let den = w / (ho - hp);
            d[i] = hp * den;
            c[i] = ho * den;
        }
        dy = if 2 * (ns + 1) < (n - m) as isize {
            c[(ns + 1) as usize]
        } else {
            let v = d[ns as usize];
            ns -= 1;
            v
        };
        y += dy;
    }
    (y, dy)
}

/// Diagonal rational interpolation through `(x, y)` evaluated at `x`.
/// Fails when the tableau meets a zero denominator.
pub fn rational_interpolate(samples: &[(f64, f64)], x: f64) -> Result<(f64, f64)> {
    const TINY: f64 = 1e-300;
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidInput("interpolation needs samples"));
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut ns = 0;
    let mut hh = (x - samples[0].0).abs();
    for (i, s) in samples.iter().enumerate() {
        let h = (x - s.0).abs();
        if h == 0.0 {
            return Ok((s.1, 0.0));
        }
        if h < hh {
            ns = i;
            hh = h;
        }
        c.push(s.1);
        d.push(s.1 + TINY);
    }
    let mut y = samples[ns].1;
    let mut dy = 0.0;
    let mut ns = ns as isize - 1;
    for m in 1..n {
        for i in 0..n - m {
            let w = c[i + 1] - d[i];
            let h = samples[i + m].0 - x;
            let t = (samples[i].0 - x) * d[i] / h;
            let dd = t - c[i + 1];
            if dd == 0.0 || !dd.is_finite() {
                return Err(Error::SingularInput("rational tableau has a pole at the target"));
            }
            let dd = w / dd;
            d[i] = c[i + 1] * dd;
            c[i] = t * dd;
        }
        dy = if 2 * (ns + 1) < (n - m) as isize {
            c[(ns + 1) as usize]
        } else {
            let v = d[ns as usize];
            ns -= 1;
            v
        };
        y += dy;
    }
    Ok((y, dy))
}

#[derive(Clone, Copy)]
enum Scheme {
    Polynomial,
    Rational,
}

/// Richardson extrapolation of `samples` (pairs `(t, value)`) to `t = 0`
/// using the `order + 1` samples nearest zero.
pub fn extrapolate_limit(samples: &[(f64, f64)], order: usize) -> Result<Extrapolation> {
    extrapolate(samples, order, Scheme::Polynomial)
}

/// As [`extrapolate_limit`] with a diagonal rational tableau; falls back to
/// the polynomial tableau at any order where the rational one has a pole.
pub fn extrapolate_limit_rational(samples: &[(f64, f64)], order: usize) -> Result<Extrapolation> {
    extrapolate(samples, order, Scheme::Rational)
}

fn extrapolate(samples: &[(f64, f64)], order: usize, scheme: Scheme) -> Result<Extrapolation> {
    if order == 0 {
        return Err(Error::InvalidInput("extrapolation order must be at least one"));
    }
    if samples.len() < order + 1 {
        return Err(Error::InvalidInput("extrapolation needs order + 1 samples"));
    }
    if samples.iter().any(|s| !s.0.is_finite() || !s.1.is_finite()) {
        return Err(Error::NonFinite("extrapolation sample"));
    }
    if samples.iter().any(|s| s.0 <= 0.0) {
        return Err(Error::InvalidInput("extrapolation abscissae must be positive"));
    }
    let mut sorted: Vec<(f64, f64)> = samples.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidInput("extrapolation abscissae must be distinct"));
    }
    let used = &sorted[sorted.len() - (order + 1)..];

    let mut estimates = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let sub = &used[..=m];
        let v = match scheme {
            Scheme::Polynomial => polynomial_interpolate(sub, 0.0).0,
            Scheme::Rational => match rational_interpolate(sub, 0.0) {
                Ok((v, _)) => v,
                Err(_) => polynomial_interpolate(sub, 0.0).0,
            },
        };
        estimates.push(v);
    }

    let value = estimates[order];
    let last = (estimates[order] - estimates[order - 1]).abs();
    let scale = used.iter().fold(0.0f64, |m, s| m.max(s.1.abs()));
    let noise = 1e3 * f64::EPSILON * scale;
    if !value.is_finite() {
        return Err(Error::ExtrapolationFailed {
            value,
            error_estimate: f64::INFINITY,
        });
    }
    if order >= 2 {
        let prev = (estimates[order - 1] - estimates[order - 2]).abs();
        if last > prev && last > noise {
            return Err(Error::ExtrapolationFailed {
                value,
                error_estimate: last,
            });
        }
    }
    Ok(Extrapolation {
        value,
        error_estimate: last.max(noise),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_samples_extrapolate_exactly() {
        let s = [(0.1, 1.1), (0.05, 1.05), (0.025, 1.025)];
        let e = extrapolate_limit(&s, 2).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14);
        let r = extrapolate_limit_rational(&s, 2).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_samples() {
        let s: Vec<(f64, f64)> = (0..6)
            .map(|k| {
                let t = 0.1 / libm::pow(2.0, k as f64);
                (t, libm::exp(t))
            })
            .collect();
        let e = extrapolate_limit(&s, 5).unwrap();
        assert!((e.value - 1.0).abs() < 1e-6);
        assert!(e.error_estimate < 1e-6);
        let r = extrapolate_limit_rational(&s, 5).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oscillating_tableau_is_flagged() {
        let s: Vec<(f64, f64)> = (0..6)
            .map(|k| (1.0 / libm::pow(2.0, k as f64), if k % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        assert!(matches!(
            extrapolate_limit(&s, 5),
            Err(Error::ExtrapolationFailed { .. })
        ));
    }

    #[test]
    fn rejects_malformed_ladders() {
        assert!(extrapolate_limit(&[(0.1, 1.0)], 1).is_err());
        assert!(extrapolate_limit(&[(0.1, 1.0), (0.1, 2.0)], 1).is_err());
        assert!(extrapolate_limit(&[(-0.1, 1.0), (0.1, 2.0)], 1).is_err());
        assert!(extrapolate_limit(&[(0.2, 1.0), (0.1, 2.0)], 0).is_err());
    }

    #[test]
    fn rational_reproduces_pole_function() {
        let f = |x: f64| 1.0 / (x + 2.0);
        let s: Vec<(f64, f64)> = (0..5).map(|i| (1.0 + i as f64, f(1.0 + i as f64))).collect();
        let (v, _) = rational_interpolate(&s, -1.5).unwrap();
        assert!((v - f(-1.5)).abs() < 1e-12);
    }
}
