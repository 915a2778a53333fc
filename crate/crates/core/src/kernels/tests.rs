use super::*;
use crate::units::{Dims, NaturalScale};
use approx::assert_relative_eq;
use proptest::prelude::*;

const INF: Separation = Separation::Infinite;

fn unit(h: f64) -> Separation {
    Separation::Finite(h)
}

fn finite(v: KernelValue) -> (f64, f64) {
    match v {
        KernelValue::Finite { re, im } => (re, im),
        KernelValue::Divergent => panic!("unexpected divergence"),
    }
}

#[test]
fn q2_examples() {
    assert_eq!(q2_combination(&KernelPoint::natural(2.0, 1.0, INF)), 3.0);
    assert_eq!(q2_combination(&KernelPoint::natural(1.0, 1.0, INF)), 0.0);
    assert_eq!(q2_combination(&KernelPoint::natural(0.0, 2.0, INF)), -4.0);
}

#[test]
fn region_examples() {
    assert_eq!(classify_region(&KernelPoint::natural(2.0, 1.0, unit(1.0))), Region::I);
    assert_eq!(classify_region(&KernelPoint::natural(0.0, 2.0, unit(1.0))), Region::IIa);
    assert_eq!(classify_region(&KernelPoint::natural(0.0, 4.0, unit(1.0))), Region::IIb);
    assert_eq!(classify_region(&KernelPoint::natural(0.0, 1e6, INF)), Region::IIa);
}

#[test]
fn region_boundaries() {
    assert_eq!(classify_region(&KernelPoint::natural(3.0, 3.0, unit(1.0))), Region::I);
    assert_eq!(classify_region(&KernelPoint::natural(0.0, PI, unit(1.0))), Region::IIa);
    assert_eq!(
        classify_region(&KernelPoint::natural(0.0, PI * (1.0 + 1e-12), unit(1.0))),
        Region::IIb
    );
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    let edge = eval.pair(&KernelPoint::natural(0.0, PI, unit(1.0))).unwrap();
    assert!(!edge.a_plus.is_divergent() && !edge.a_minus.is_divergent());
    let inside = eval.pair(&KernelPoint::natural(0.0, 3.5, unit(1.0))).unwrap();
    assert!(inside.a_plus.is_divergent() && inside.a_minus.is_divergent());
}

#[test]
fn single_plate_closed_form_examples() {
    let (re, im) = finite(a_plus_infinite(1.0, 0.0, 1.0));
    assert_relative_eq!(re, -2.814_50e-4, max_relative = 1e-5);
    assert_eq!(im, 0.0);
    let (re, im) = finite(a_plus_infinite(0.0, 2.0, 1.0));
    assert_eq!(re, 0.0);
    assert_relative_eq!(im, 9.006_39e-3, max_relative = 1e-5);
    assert_eq!(a_plus_infinite(5.0, 5.0, 1.0), KernelValue::Finite { re: 0.0, im: 0.0 });
    let (_, im) = finite(a_plus_infinite(1.0, -2.0, 1.0));
    assert_relative_eq!(im, -libm::pow(3.0, 2.5) / (360.0 * PI * PI), max_relative = 1e-15);
    assert_relative_eq!(im, -4.387_3e-3, max_relative = 1e-4);
}

#[test]
fn propagator_examples() {
    assert_eq!(surface_propagator(1.0, 0.0).unwrap(), 0.5);
    assert_relative_eq!(surface_propagator(2.0, 1.0).unwrap(), 0.033_834, max_relative = 1e-4);
    assert_eq!(surface_propagator(1.0, f64::INFINITY).unwrap(), 0.0);
    assert!(matches!(surface_propagator(0.0, 1.0), Err(Error::SingularInput(_))));
}

#[test]
fn threshold_examples() {
    assert_relative_eq!(resonance_threshold(0.0, unit(1.0), 1.0).unwrap(), PI);
    let thr = resonance_threshold(3.0, unit(1.0), 1.0).unwrap();
    assert_relative_eq!(thr, libm::sqrt(9.0 + PI * PI), max_relative = 1e-15);
    assert_relative_eq!(thr, 4.3439, max_relative = 1e-4);
    assert!(resonance_threshold(1.0, INF, 1.0).is_none());
}

#[test]
fn euclidean_single_plate() {
    let (ap, am) = kernels_euclidean(1.0, INF, &QuadratureSpec::default()).unwrap();
    assert_relative_eq!(ap, -1.0 / (360.0 * PI * PI), max_relative = 1e-15);
    assert_eq!(am, 0.0);
}

#[test]
fn single_plate_has_exactly_zero_cross_kernel() {
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    for (q, w) in [(1.0, 0.5), (0.2, 3.0), (4.0, 4.0)] {
        let p = eval.pair(&KernelPoint::natural(q, w, INF)).unwrap();
        assert_eq!(p.a_minus, KernelValue::Finite { re: 0.0, im: 0.0 });
    }
}

#[test]
fn uniform_static_limit_is_casimir_stiffness() {
    let spec = QuadratureSpec::with_rel_tol(1e-10);
    for h in [0.5, 1.0, 3.0] {
        let (ap, am) = kernels_euclidean(0.0, unit(h), &spec).unwrap();
        let k = PI * PI / (120.0 * libm::pow(h, 5.0));
        assert_relative_eq!(ap, k, max_relative = 1e-9);
        assert_relative_eq!(am, k, max_relative = 1e-9);
    }
}

#[test]
fn depends_only_on_q2() {
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    let a = eval.pair(&KernelPoint::natural(2.0, 1.0, unit(1.3))).unwrap();
    let b = eval
        .pair(&KernelPoint::natural(3.0_f64.sqrt(), 0.0, unit(1.3)))
        .unwrap();
    let (a1, _) = finite(a.a_plus);
    let (b1, _) = finite(b.a_plus);
    assert_relative_eq!(a1, b1, max_relative = 1e-12);
    let (a2, _) = finite(a.a_minus);
    let (b2, _) = finite(b.a_minus);
    assert_relative_eq!(a2, b2, max_relative = 1e-12);
}

#[test]
fn single_plate_vanishes_continuously_at_light_cone() {
    let mut prev = f64::INFINITY;
    for e in [1e-1, 1e-2, 1e-3, 1e-4] {
        let above = finite(a_plus_infinite(1.0, 1.0 - e, 1.0)).0.abs();
        let below = finite(a_plus_infinite(1.0, 1.0 + e, 1.0)).1.abs();
        assert!(above < prev && below < prev * 1.01);
        prev = above.max(below);
    }
    assert!(prev < 1e-11);
}

#[test]
fn iia_dissipation_is_half_single_plate_and_separation_free() {
    let eval = KernelEvaluator::new(QuadratureSpec::default())
        .unwrap()
        .with_continuation()
        .unwrap();
    let (q, w) = (0.1, 0.25);
    let (_, single) = finite(a_plus_infinite(q, w, 1.0));
    for h in [2.0, 5.0, 10.0] {
        let p = KernelPoint::natural(q, w, unit(h));
        assert_eq!(classify_region(&p), Region::IIa);
        let (_, im) = finite(eval.pair(&p).unwrap().a_plus);
        assert_eq!(im, 0.5 * single);
        assert_eq!(finite(eval.pair(&p).unwrap().a_minus).1, 0.0);
    }
}

#[test]
fn continuation_is_finite_up_to_boundary() {
    let eval = KernelEvaluator::new(QuadratureSpec::default())
        .unwrap()
        .with_continuation()
        .unwrap();
    for frac in [0.1, 0.5, 0.9, 0.999, 1.0] {
        let w = PI * libm::sqrt(frac);
        let p = eval.pair(&KernelPoint::natural(0.0, w, unit(1.0))).unwrap();
        let (re, _) = finite(p.a_plus);
        let (am, _) = finite(p.a_minus);
        assert!(re.is_finite() && am.is_finite() && am > 0.0);
    }
}

#[test]
fn continuation_joins_euclidean_values_smoothly() {
    // Continuing to a point just below zero must approach the Q^2 = 0 value.
    let eval = KernelEvaluator::new(QuadratureSpec::with_rel_tol(1e-10))
        .unwrap()
        .with_continuation()
        .unwrap();
    let (a0, m0) = eval.euclidean(0.0, unit(1.0)).unwrap();
    let p = eval.pair(&KernelPoint::natural(0.0, 1e-4, unit(1.0))).unwrap();
    assert_relative_eq!(finite(p.a_plus).0, a0, max_relative = 1e-7);
    assert_relative_eq!(finite(p.a_minus).0, m0, max_relative = 1e-7);
}

#[test]
fn large_separation_decoupling() {
    let spec = QuadratureSpec::with_rel_tol(1e-10);
    let eval = KernelEvaluator::new(spec).unwrap();
    let mut prev = f64::INFINITY;
    for qh in [5.0, 10.0, 20.0, 40.0] {
        let (ap, am) = eval.euclidean(1.0, unit(qh)).unwrap();
        let single = -1.0 / (360.0 * PI * PI);
        let dev = ((ap - single) / single).abs();
        assert!(dev < prev, "deviation must shrink: {dev} at QH = {qh}");
        prev = dev;
        // The surviving correction is the half-space term pi^2 Q / (240 H^4).
        let asym = PI * PI / (240.0 * libm::pow(qh, 4.0));
        if qh >= 20.0 {
            assert_relative_eq!(ap - single, asym, max_relative = 0.05);
            assert!((am / single).abs() < 1e-6);
        }
    }
}

#[test]
fn slope_matches_single_plate_when_decoupled() {
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    let single = eval.a_plus_slope(1.0, INF).unwrap();
    assert_relative_eq!(single, -1.0 / (144.0 * PI * PI), max_relative = 1e-15);
    let far = eval.a_plus_slope(1.0, unit(20.0)).unwrap();
    assert_relative_eq!(far, single, max_relative = 1e-3);
}

#[test]
fn slope_agrees_with_secant_of_kernel() {
    let eval = KernelEvaluator::new(QuadratureSpec::with_rel_tol(1e-12)).unwrap();
    let h = 0.7;
    let x = 2.0;
    let d = 1e-4;
    let (lo, _) = eval.euclidean(x - d, unit(h)).unwrap();
    let (hi, _) = eval.euclidean(x + d, unit(h)).unwrap();
    let secant = (hi - lo) / (2.0 * d);
    assert_relative_eq!(eval.a_plus_slope(x, unit(h)).unwrap(), secant, max_relative = 1e-5);
}

#[test]
fn si_and_natural_kernels_agree() {
    let spec = QuadratureSpec::with_rel_tol(1e-10);
    let scale = NaturalScale::new(1e-3).unwrap();
    let (q_si, h_si) = (2.0e3, 1.5e-3);
    let (a_si, m_si) = kernels_euclidean(q_si * q_si, unit(h_si), &spec).unwrap();
    let q = scale.to_natural(q_si, Dims::WAVENUMBER).unwrap();
    let h = scale.to_natural(h_si, Dims::LENGTH).unwrap();
    let (a_n, m_n) = kernels_euclidean(q * q, unit(h), &spec).unwrap();
    assert_relative_eq!(
        scale.from_natural(a_n, Dims::KERNEL).unwrap(),
        a_si,
        max_relative = 1e-10
    );
    assert_relative_eq!(
        scale.from_natural(m_n, Dims::KERNEL).unwrap(),
        m_si,
        max_relative = 1e-10
    );
}

#[test]
fn normalization_hook_scales_everything() {
    let base = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    let scaled = base.clone().with_normalization(1.5);
    let p = KernelPoint::natural(1.0, 0.5, unit(1.0));
    let (a, _) = finite(base.pair(&p).unwrap().a_plus);
    let (b, _) = finite(scaled.pair(&p).unwrap().a_plus);
    assert_relative_eq!(b, 1.5 * a, max_relative = 1e-14);
}

#[test]
fn invalid_points_are_rejected() {
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    assert!(eval.pair(&KernelPoint::natural(-1.0, 0.0, INF)).is_err());
    assert!(eval.pair(&KernelPoint::natural(1.0, f64::NAN, INF)).is_err());
    assert!(eval.pair(&KernelPoint::natural(1.0, 0.0, unit(0.0))).is_err());
    assert!(eval.euclidean(-1.0, unit(1.0)).is_err());
}

proptest! {
    #[test]
    fn closed_form_parity(q in 0.0f64..5.0, w in 0.0f64..5.0) {
        let (rp, ip) = finite(a_plus_infinite(q, w, 1.0));
        let (rm, im) = finite(a_plus_infinite(q, -w, 1.0));
        prop_assert_eq!(rp, rm);
        prop_assert_eq!(ip, -im);
    }

    #[test]
    fn q2_reproducible(q in 0.0f64..1e4, w in -1e4f64..1e4) {
        let p = KernelPoint::natural(q, w, INF);
        let exact = q * q - w * w;
        prop_assert!((p.q2() - exact).abs() <= 1e-14 * (q * q + w * w));
    }

    #[test]
    fn region_matches_threshold(q in 0.0f64..5.0, w in 0.0f64..8.0, h in 0.2f64..5.0) {
        let p = KernelPoint::natural(q, w, unit(h));
        let thr = resonance_threshold(q, unit(h), 1.0).unwrap();
        let region = classify_region(&p);
        if w < q {
            prop_assert_eq!(region, Region::I);
        } else if w > thr * (1.0 + 1e-12) {
            prop_assert_eq!(region, Region::IIb);
        } else if w > q * (1.0 + 1e-12) && w < thr * (1.0 - 1e-12) {
            prop_assert_eq!(region, Region::IIa);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn shared_q2_shared_kernels(q2 in 0.05f64..4.0, w in 0.0f64..3.0, h in 0.5f64..3.0) {
        let eval = KernelEvaluator::new(QuadratureSpec::with_rel_tol(1e-10)).unwrap();
        let a = eval.pair(&KernelPoint::natural(libm::sqrt(q2), 0.0, unit(h))).unwrap();
        let b = eval.pair(&KernelPoint::natural(libm::sqrt(q2 + w * w), w, unit(h))).unwrap();
        let (a1, _) = finite(a.a_plus);
        let (b1, _) = finite(b.a_plus);
        prop_assert!(((a1 - b1) / a1).abs() < 1e-8);
    }
}
