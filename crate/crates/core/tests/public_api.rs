use std::f64::consts::PI;

use approx::assert_relative_eq;
use vacresp_core::kernels::{kernel_pair, kernels_euclidean, KernelPoint, KernelValue, Region, Separation};
use vacresp_core::oracle::{fixed_panel_kernels, run_oracle_suite};
use vacresp_core::quadrature::QuadratureSpec;
use vacresp_core::response::{CorrugationSpec, PlateGeometry, ResponseModel};
use vacresp_core::units::{Dims, NaturalScale, C};
use vacresp_core::KernelEvaluator;

#[test]
fn free_functions_match_the_prepared_evaluator() {
    let spec = QuadratureSpec::default();
    let eval = KernelEvaluator::new(spec).unwrap().with_continuation().unwrap();
    for (q, w) in [(2.0, 0.5), (1.0, 1.4), (0.3, 0.0)] {
        let p = KernelPoint::natural(q, w, Separation::Finite(1.0));
        assert_eq!(kernel_pair(&p, &spec).unwrap(), eval.pair(&p).unwrap());
    }
    let ((ap, am), _) = fixed_panel_kernels(3.0, 0.8);
    let (bp, bm) = kernels_euclidean(3.0, Separation::Finite(0.8), &spec).unwrap();
    assert_relative_eq!(ap, bp, max_relative = 1e-8);
    assert_relative_eq!(am, bm, max_relative = 1e-8);
}

#[test]
fn si_kernel_scales_as_inverse_fifth_power_of_length() {
    let spec = QuadratureSpec::default();
    let scale = NaturalScale::new(2e-6).unwrap();
    let natural = kernel_pair(&KernelPoint::natural(1.5, 0.7, Separation::Finite(1.0)), &spec).unwrap();
    let si = kernel_pair(
        &KernelPoint::si(1.5 / 2e-6, 0.7 * C / 2e-6, Separation::Finite(2e-6)),
        &spec,
    )
    .unwrap();
    let to_si = |v: KernelValue| v.complex().unwrap() * scale.unit(Dims::KERNEL);
    assert_relative_eq!(
        to_si(natural.a_plus).re,
        si.a_plus.complex().unwrap().re,
        max_relative = 1e-9
    );
    assert_relative_eq!(
        to_si(natural.a_minus).re,
        si.a_minus.complex().unwrap().re,
        max_relative = 1e-9
    );
    assert_eq!(
        vacresp_core::kernels::classify_region(&KernelPoint::si(0.0, 1.1 * PI * C / 2e-6, Separation::Finite(2e-6))),
        Region::IIb
    );
}

#[test]
fn sliding_plates_feel_a_sinusoidal_force() {
    let model = ResponseModel::new(QuadratureSpec::default()).unwrap();
    let k = [1e5, 0.0];
    let g = PlateGeometry::new(1e-6, Separation::Finite(1e-5)).unwrap();
    let c1 = CorrugationSpec::new(1e-7, k, 0.0).unwrap();
    let quarter = model
        .residual_force(&c1, Some(&CorrugationSpec::new(1e-7, k, PI / 2.0).unwrap()), &g)
        .unwrap();
    let sixth = model
        .residual_force(&c1, Some(&CorrugationSpec::new(1e-7, k, PI / 6.0).unwrap()), &g)
        .unwrap();
    assert_relative_eq!(sixth[0], 0.5 * quarter[0], max_relative = 1e-12);
    let trace = model
        .josephson_ac(k, 1e-7, 1e-7, [1.0, 0.0], 1e-6, g.separation, &[0.0, PI / 2e5])
        .unwrap();
    assert!(trace[0][0].abs() < 1e-12 * quarter[0].abs());
    assert_relative_eq!(trace[1][0], quarter[0], max_relative = 1e-12);
}

#[test]
fn oracle_suite_is_deterministic() {
    let eval = KernelEvaluator::new(QuadratureSpec::default()).unwrap();
    assert_eq!(run_oracle_suite(&eval), run_oracle_suite(&eval));
}
