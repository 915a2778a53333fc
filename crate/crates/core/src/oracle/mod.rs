//! Cross-checks of the kernel and response layers against routes that share
//! no integrand code with them.
//!
//! Every check yields an [`OracleReport`] whose values are pure numbers:
//! kernels in natural units, SI observables as ratios. Checks are grouped so a caller can
//! run groups concurrently; [`run_oracle_suite`] runs them all and sorts the
//! reports by name.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::kernels::{KernelEvaluator, KernelPoint, Separation};
use crate::quadrature::{integrate_radial_angular, QuadratureSpec};
use crate::response::{
    shear_viscosity_asymptotic, CorrugationSpec, LineSpectrum, PlateGeometry, ResponseModel, SpectralLine,
};
use crate::units::C;
use crate::Error;

mod routes;

pub use routes::{fixed_panel_kernels, fixed_panel_remainder, single_plate_momentum, single_plate_position};

/// Outcome of one cross-check. `rel_error` is compared against `tolerance`;
/// for bound checks the reference is zero and `rel_error` is the bounded
/// quantity itself.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub reference_value: f64,
    pub test_value: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleReport {
    /// Relative comparison of `test` against `reference`.
    pub fn compare(name: &str, reference: f64, test: f64, tolerance: f64) -> Self {
        let rel_error = if reference == 0.0 {
            test.abs()
        } else {
            ((test - reference) / reference).abs()
        };
        Self {
            name: name.into(),
            reference_value: reference,
            test_value: test,
            rel_error,
            tolerance,
            passed: rel_error <= tolerance,
        }
    }

    /// Passes when `|value| <= bound`.
    pub fn bound(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            reference_value: 0.0,
            test_value: value,
            rel_error: value.abs(),
            tolerance: bound,
            passed: value.abs() <= bound,
        }
    }

    /// A check that could not be evaluated.
    pub fn errored(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            reference_value: f64::NAN,
            test_value: f64::NAN,
            rel_error: f64::INFINITY,
            tolerance,
            passed: false,
        }
    }
}

/// Independent groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleGroup {
    SinglePlateExpansion,
    SinglePlateRoutes,
    DualQuadrature,
    Continuation,
    Stiffness,
    Decoupling,
    Response,
}

impl OracleGroup {
    pub const ALL: [OracleGroup; 7] = [
        OracleGroup::SinglePlateExpansion,
        OracleGroup::SinglePlateRoutes,
        OracleGroup::DualQuadrature,
        OracleGroup::Continuation,
        OracleGroup::Stiffness,
        OracleGroup::Decoupling,
        OracleGroup::Response,
    ];
}

/// Agreement demanded between the adaptive kernels or the closed form and
/// an independent quadrature route.
pub const DUAL_TOLERANCE: f64 = 1e-6;

/// Agreement demanded of checks that should hold to the quadrature
/// tolerance itself.
pub fn route_tolerance(spec: &QuadratureSpec) -> f64 {
    (10.0 * spec.rel_tol).max(1e-10)
}

/// Runs one group.
pub fn run_group(group: OracleGroup, eval: &KernelEvaluator) -> Vec<OracleReport> {
    match group {
        OracleGroup::SinglePlateExpansion => oracle_single_plate_expansion(eval),
        OracleGroup::SinglePlateRoutes => oracle_single_plate_routes(eval),
        OracleGroup::DualQuadrature => DUAL_POINTS
            .iter()
            .flat_map(|&(q2, h)| {
                oracle_dual_quadrature(&KernelPoint::natural(libm::sqrt(q2), 0.0, Separation::Finite(h)), eval)
            })
            .chain([oracle_two_plate_coefficient(eval)])
            .collect(),
        OracleGroup::Continuation => oracle_continuation(eval),
        OracleGroup::Stiffness => oracle_stiffness(eval),
        OracleGroup::Decoupling => oracle_decoupling(eval),
        OracleGroup::Response => oracle_response(eval),
    }
}

/// All checks, sorted by name.
pub fn run_oracle_suite(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let mut all: Vec<OracleReport> = OracleGroup::ALL.iter().flat_map(|&g| run_group(g, eval)).collect();
    sort_reports(&mut all);
    all
}

/// Deterministic merge order for reports gathered from several groups.
pub fn sort_reports(reports: &mut [OracleReport]) {
    reports.sort_by(|a, b| a.name.cmp(&b.name));
}

/// `(Q^2, H)` points for the finite-separation route comparison.
pub const DUAL_POINTS: [(f64, f64); 5] = [(1.0, 2.0), (0.01, 0.1), (0.04, 1.0), (25.0, 0.3), (4.0, 1.5)];

fn single_plate_value(eval: &KernelEvaluator, q: f64, omega: f64) -> Option<Complex64> {
    eval.pair(&KernelPoint::natural(q, omega, Separation::Infinite))
        .ok()
        .and_then(|p| p.a_plus.complex())
}

/// Frequency expansion of the single-plate kernel at low frequency:
/// `A(k, w) - A(k, 0) = k^3 w^2 / (144 pi^2) + O(w^4)`, by symmetric
/// differences extrapolated in `w^2`.
pub fn oracle_single_plate_expansion(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let coefficient = |k: f64, w0: f64| -> Option<f64> {
        let base = single_plate_value(eval, k, 0.0)?.re;
        let mut table: Vec<Vec<f64>> = Vec::new();
        for j in 0..6 {
            let w = w0 * k / libm::pow(2.0, j as f64);
            let up = single_plate_value(eval, k, w)?.re;
            let down = single_plate_value(eval, k, -w)?.re;
            let mut row = vec![(up - 2.0 * base + down) / (2.0 * w * w)];
            for m in 1..=j {
                let f = libm::pow(4.0, m as f64);
                let prev = &table[j - 1];
                row.push(row[m - 1] + (row[m - 1] - prev[m - 1]) / (f - 1.0));
            }
            table.push(row);
        }
        table.last().and_then(|r| r.last().copied())
    };
    let exact = 1.0 / (144.0 * PI * PI);
    let mut out = Vec::new();
    let (k1, k1_half, k3) = (coefficient(1.0, 0.2), coefficient(1.0, 0.1), coefficient(3.0, 0.2));
    match k1 {
        Some(v) => out.push(OracleReport::compare("single_plate_expansion_k1", exact, v, 1e-6)),
        None => out.push(OracleReport::errored("single_plate_expansion_k1", 1e-6)),
    }
    match (k1, k1_half) {
        (Some(a), Some(b)) => out.push(OracleReport::compare("single_plate_expansion_step_halving", a, b, 1e-8)),
        _ => out.push(OracleReport::errored("single_plate_expansion_step_halving", 1e-8)),
    }
    match (k1, k3) {
        (Some(a), Some(b)) => out.push(OracleReport::compare(
            "single_plate_expansion_k3_scaling",
            27.0 * a,
            b,
            1e-6,
        )),
        _ => out.push(OracleReport::errored("single_plate_expansion_k3_scaling", 1e-6)),
    }
    out
}

/// The closed-form single-plate kernel against momentum-space and
/// position-space integrals on a 20-point logarithmic `Q^2` grid. Each
/// report carries the worst point.
pub fn oracle_single_plate_routes(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let tol = DUAL_TOLERANCE;
    let tight = QuadratureSpec::with_rel_tol(1e-12);
    let mut worst_m = OracleReport::bound("single_plate_routes_momentum", 0.0, tol);
    let mut worst_p = OracleReport::bound("single_plate_routes_position", 0.0, tol);
    for i in 0..20 {
        let q2 = libm::pow(10.0, -2.0 + 4.0 * i as f64 / 19.0);
        let Some(test) = single_plate_value(eval, libm::sqrt(q2), 0.0) else {
            return vec![
                OracleReport::errored("single_plate_routes_momentum", tol),
                OracleReport::errored("single_plate_routes_position", tol),
            ];
        };
        let m = match single_plate_momentum(q2, &tight) {
            Ok(v) => OracleReport::compare("single_plate_routes_momentum", v, test.re, tol),
            Err(_) => OracleReport::errored("single_plate_routes_momentum", tol),
        };
        let p = OracleReport::compare("single_plate_routes_position", single_plate_position(q2), test.re, tol);
        if !(m.rel_error <= worst_m.rel_error) {
            worst_m = m;
        }
        if !(p.rel_error <= worst_p.rel_error) {
            worst_p = p;
        }
    }
    vec![worst_m, worst_p]
}

/// Adaptive kernels at a Euclidean `point` against the fixed-panel route.
pub fn oracle_dual_quadrature(point: &KernelPoint, eval: &KernelEvaluator) -> Vec<OracleReport> {
    let tol = DUAL_TOLERANCE;
    let q2 = point.q2();
    let tag = match point.separation {
        Separation::Finite(h) => format!("q2_{q2:.4}_h_{h:.4}"),
        Separation::Infinite => format!("q2_{q2:.4}_h_inf"),
    };
    let names = [
        format!("dual_quadrature_a_plus_{tag}"),
        format!("dual_quadrature_a_minus_{tag}"),
    ];
    let adaptive = eval.euclidean(q2, point.separation);
    let reference = match point.separation {
        Separation::Finite(h) if q2 > 0.0 => Some(fixed_panel_kernels(q2, h).0),
        _ => None,
    };
    match (adaptive, reference) {
        (Ok((ap, am)), Some((rp, rm))) => vec![
            OracleReport::compare(&names[0], rp, ap, tol),
            OracleReport::compare(&names[1], rm, am, tol),
        ],
        _ => names.iter().map(|n| OracleReport::errored(n, tol)).collect(),
    }
}

/// The two-plate mass coefficient `B = -48 H^3 dA+/dQ^2` at `Q = 0` from the
/// evaluator's slope against Richardson-extrapolated forward differences of
/// the fixed-panel remainder.
pub fn oracle_two_plate_coefficient(eval: &KernelEvaluator) -> OracleReport {
    const NAME: &str = "two_plate_coefficient_routes";
    let tol = 1e-6;
    let test = match eval.a_plus_slope(0.0, Separation::Finite(1.0)) {
        Ok(s) => -48.0 * s,
        Err(_) => return OracleReport::errored(NAME, tol),
    };
    let f0 = fixed_panel_remainder(0.0);
    let mut table: Vec<Vec<f64>> = Vec::new();
    for j in 0..7 {
        let step = 0.1 / libm::pow(2.0, j as f64);
        let mut row = vec![(fixed_panel_remainder(step) - f0) / step];
        for m in 1..=j {
            let f = libm::pow(2.0, m as f64);
            let prev = &table[j - 1];
            row.push(row[m - 1] + (row[m - 1] - prev[m - 1]) / (f - 1.0));
        }
        table.push(row);
    }
    let slope = table[6][6];
    OracleReport::compare(NAME, -48.0 * slope, test, tol)
}

/// Ladder agreement of the continued remainders, the interpolant against the
/// fixed-panel route inside the sampled range, and the `H^-5` decay of the
/// continued kernel at fixed `Q^2 H^2`.
pub fn oracle_continuation(eval: &KernelEvaluator) -> Vec<OracleReport> {
    use crate::kernels::{ContinuationTable, LADDER_AGREEMENT};
    let built;
    let table = match eval.table() {
        Some(t) => t,
        None => match ContinuationTable::build(eval.spec()) {
            Ok(t) => {
                built = t;
                &built
            }
            Err(_) => return vec![OracleReport::errored("continuation_table", LADDER_AGREEMENT)],
        },
    };
    let mut out = Vec::new();
    for (label, x) in [
        ("near_zero", -0.1 * PI * PI),
        ("mid", -0.5 * PI * PI),
        ("near_boundary", -(1.0 - 1e-3) * PI * PI),
    ] {
        for (which, kernel) in [(0, "remainder_plus"), (1, "a_minus")] {
            let name = format!("continuation_ladders_{kernel}_{label}");
            out.push(match table.continue_to(x, which) {
                Ok(c) => OracleReport::compare(&name, c.other, c.value, LADDER_AGREEMENT),
                Err(Error::ContinuationMismatch { first, second, .. }) => {
                    OracleReport::compare(&name, second, first, LADDER_AGREEMENT)
                }
                Err(_) => OracleReport::errored(&name, LADDER_AGREEMENT),
            });
        }
    }
    let tol = route_tolerance(eval.spec());
    out.push(match table.continue_to(0.5, 0) {
        Ok(c) => OracleReport::compare(
            "continuation_interpolant_fixed_panel",
            fixed_panel_remainder(0.5),
            c.value * eval.normalization(),
            tol,
        ),
        Err(_) => OracleReport::errored("continuation_interpolant_fixed_panel", tol),
    });
    let remainder = |h: f64| -> Option<f64> {
        let q = 0.5 / h;
        let omega = libm::sqrt(q * q + 0.5 * PI * PI / (h * h));
        let point = KernelPoint::natural(q, omega, Separation::Finite(h));
        eval.pair(&point).ok()?.a_plus.complex().map(|a| a.re)
    };
    out.push(match (remainder(1.0), remainder(100.0)) {
        (Some(near), Some(far)) => OracleReport::compare("continuation_remainder_decay", 1e-10, far / near, 1e-8),
        _ => OracleReport::errored("continuation_remainder_decay", 1e-8),
    });
    out
}

/// Static kernels at `Q = 0` against the plate stiffness `pi^2 / (120 H^5)`
/// implied by the static interaction energy `-pi^2 / (1440 H^3)`.
pub fn oracle_stiffness(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let tol = route_tolerance(eval.spec());
    let mut out = Vec::new();
    for h in [1.0, 2.5] {
        let exact = PI * PI / (120.0 * libm::pow(h, 5.0));
        let names = [format!("stiffness_a_plus_h_{h}"), format!("stiffness_a_minus_h_{h}")];
        match eval.euclidean(0.0, Separation::Finite(h)) {
            Ok((ap, am)) => {
                out.push(OracleReport::compare(&names[0], exact, ap, tol));
                out.push(OracleReport::compare(&names[1], exact, am, tol));
            }
            Err(_) => out.extend(names.iter().map(|n| OracleReport::errored(n, tol))),
        }
    }
    out
}

/// Large-separation behaviour at `QH = 20`: `A-` vanishes against the
/// single-plate kernel, `A+ - A+^inf` follows `pi^2 Q / (240 H^4)` and the
/// two-plate mass approaches the single-plate mass.
pub fn oracle_decoupling(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let h = 20.0;
    let single = -1.0 / (360.0 * PI * PI);
    let mut out = Vec::new();
    match eval.euclidean(1.0, Separation::Finite(h)) {
        Ok((ap, am)) => {
            out.push(OracleReport::bound("decoupling_a_minus_qh_20", am / single, 1e-6));
            out.push(OracleReport::compare(
                "decoupling_a_plus_tail_qh_20",
                PI * PI / (240.0 * libm::pow(h, 4.0)),
                ap - single,
                0.05,
            ));
        }
        Err(_) => {
            out.push(OracleReport::errored("decoupling_a_minus_qh_20", 1e-6));
            out.push(OracleReport::errored("decoupling_a_plus_tail_qh_20", 0.05));
        }
    }
    let model = ResponseModel::from_evaluator(eval.clone());
    let mass = CorrugationSpec::new(1e-3, [2.0 * PI / 1e-3, 0.0], 0.0).and_then(|c| {
        let g = PlateGeometry::new(1e-4, Separation::Finite(20.0 / c.wavenumber()))?;
        let far = model.mass_correction_kernel(&c, &g)?;
        Ok(far.dm_par / crate::response::mass_correction_single(&c, 1e-4).dm_par)
    });
    out.push(match mass {
        Ok(ratio) => OracleReport::compare("decoupling_mass_kh_20", 1.0, ratio, 1e-3),
        Err(_) => OracleReport::errored("decoupling_mass_kh_20", 1e-3),
    });
    out
}

/// Plate 1 at `d cos(k (x - r(t)))`, `r = eps cos(W t)`, as Bessel sidebands.
fn oscillating_plate(d: f64, k: f64, eps: f64, big_w: f64) -> LineSpectrum {
    let mut lines = Vec::new();
    for n in -12i32..=12 {
        let amp = Complex64::new(0.0, -1.0).powi(n) * (0.5 * d * libm::jn(n, k * eps));
        let w = -(n as f64) * big_w;
        lines.push(SpectralLine {
            q: [k, 0.0],
            omega: w,
            amplitude: amp,
        });
        lines.push(SpectralLine {
            q: [-k, 0.0],
            omega: -w,
            amplitude: amp.conj(),
        });
    }
    LineSpectrum::new(lines)
}

/// Consistency of the response layer with the kernels and with itself.
pub fn oracle_response(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let model = ResponseModel::from_evaluator(eval.clone());
    let tol = route_tolerance(eval.spec());
    let mut out = Vec::new();

    out.push(match integrate_radial_angular(|p, _| libm::exp(-p), eval.spec()) {
        Ok(r) => OracleReport::compare("radial_angular_closed_form", 4.0, r.value, tol),
        Err(_) => OracleReport::errored("radial_angular_closed_form", tol),
    });

    // Curvature of the action in the drive amplitude is half the response.
    let single = PlateGeometry::new(1.0, Separation::Infinite);
    for (label, ratio) in [("below_light_cone", 0.4), ("above_light_cone", 2.0)] {
        let name = format!("effective_action_curvature_{label}");
        let check = single.clone().and_then(|g| {
            let big_w = ratio * C;
            let action = |eps: f64| {
                model.effective_action(
                    &oscillating_plate(1.0, 1.0, eps, big_w),
                    &LineSpectrum::default(),
                    &g,
                    1.0,
                )
            };
            let e = 1e-3;
            let curv = (action(e)? - action(0.0)? * 2.0 + action(-e)?) / (e * e);
            let chi = model.response_tensor(&CorrugationSpec::new(1.0, [1.0, 0.0], 0.0)?, None, &g, big_w)?;
            Ok(curv.re / (0.5 * chi.parallel.re))
        });
        out.push(match check {
            Ok(ratio) => OracleReport::compare(&name, 1.0, ratio, 1e-5),
            Err(_) => OracleReport::errored(&name, 1e-5),
        });
    }

    let josephson = (|| {
        let k = [3e3, 4e3];
        let g = PlateGeometry::new(1e-4, Separation::Finite(2e-4))?;
        let c1 = CorrugationSpec::new(1e-5, k, 0.4)?;
        let c2 = CorrugationSpec::new(2e-5, k, 1.4)?;
        let f = model.residual_force(&c1, Some(&c2), &g)?;
        let dc = model.josephson_dc(k, 1e-5, 2e-5, 1.0, 1e-4, Separation::Finite(2e-4))?;
        Ok::<_, Error>(f[1] / dc[1])
    })();
    out.push(match josephson {
        Ok(ratio) => OracleReport::compare("residual_force_josephson", 1.0, ratio, 1e-12),
        Err(_) => OracleReport::errored("residual_force_josephson", 1e-12),
    });

    // Above the light cone the full viscosity is the fast-drive asymptote
    // times (1 - (ck/w)^2)^(5/2).
    let k = 1e3;
    let viscosity = (|| {
        let c = CorrugationSpec::new(1e-9, [k, 0.0], 0.0)?;
        let g = PlateGeometry::new(1e-4, Separation::Infinite)?;
        let w = 10.0 * C * k;
        let full = model.shear_viscosity(&c, &g, w)?.eta_par;
        Ok::<_, Error>(full / shear_viscosity_asymptotic(&c, 1e-4, w))
    })();
    out.push(match viscosity {
        Ok(t) => OracleReport::compare("viscosity_full_over_asymptote_10ck", libm::pow(0.99, 2.5), t, 1e-9),
        Err(_) => OracleReport::errored("viscosity_full_over_asymptote_10ck", 1e-9),
    });

    let fifth = (|| {
        let c = CorrugationSpec::new(1e-3, [k, 0.0], 0.0)?;
        let g = PlateGeometry::new(1e-4, Separation::Infinite)?;
        let lo = model.response_tensor(&c, None, &g, 200.0 * C * k)?.parallel.im;
        let hi = model.response_tensor(&c, None, &g, 400.0 * C * k)?.parallel.im;
        Ok::<_, Error>(hi / lo)
    })();
    let expected = 32.0 * libm::pow((1.0 - 1.0 / 160_000.0) / (1.0 - 1.0 / 40_000.0), 2.5);
    out.push(match fifth {
        Ok(t) => OracleReport::compare("force_spectrum_fifth_power", expected, t, 1e-9),
        Err(_) => OracleReport::errored("force_spectrum_fifth_power", 1e-9),
    });
    out
}

#[cfg(test)]
mod tests;
