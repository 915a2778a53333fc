use super::*;

fn evaluator() -> KernelEvaluator {
    KernelEvaluator::new(QuadratureSpec::default()).unwrap()
}

#[test]
fn suite_passes_and_is_sorted() {
    let reports = run_oracle_suite(&evaluator());
    let failed: Vec<&OracleReport> = reports.iter().filter(|r| !r.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(reports.windows(2).all(|w| w[0].name < w[1].name));
}

#[test]
fn perturbed_normalization_is_caught() {
    let eval = evaluator().with_normalization(1.0 + 1e-4);
    for group in [
        OracleGroup::SinglePlateRoutes,
        OracleGroup::DualQuadrature,
        OracleGroup::Stiffness,
    ] {
        let reports = run_group(group, &eval);
        assert!(reports.iter().any(|r| !r.passed), "{group:?} missed the perturbation");
    }
}

#[test]
fn fixed_panel_route_is_converged() {
    for &(q2, h) in &DUAL_POINTS {
        let ((ap, am), err) = fixed_panel_kernels(q2, h);
        assert!(err <= 1e-12 * ap.abs().max(am.abs()), "({q2}, {h}): {err}");
    }
}

#[test]
fn fixed_panel_remainder_is_continuous_at_zero() {
    let a = fixed_panel_remainder(0.0);
    let b = fixed_panel_remainder(1e-10);
    assert!((a - b).abs() < 1e-9 * a.abs());
}

#[test]
fn report_constructors() {
    let r = OracleReport::compare("x", 2.0, 2.0 + 1e-9, 1e-9);
    assert!(r.passed);
    assert!(!OracleReport::compare("x", 2.0, 2.1, 1e-9).passed);
    assert!(OracleReport::bound("y", -1e-7, 1e-6).passed);
    assert!(!OracleReport::errored("z", 1.0).passed);
}
