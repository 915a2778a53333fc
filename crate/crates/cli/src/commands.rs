//! Subcommand bodies. Each returns a [`Table`]; rows computed in parallel
//! are collected in index order.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};
use vacresp_core::kernels::{classify_region, KernelEvaluator, KernelPoint, KernelValue, Separation};
use vacresp_core::oracle::{run_group, sort_reports, OracleGroup, OracleReport};
use vacresp_core::quadrature::QuadratureSpec;
use vacresp_core::response::{
    capillary_corrections, decay_time, mass_correction_single, mass_correction_two_plate, shear_viscosity_asymptotic,
    CorrugationSpec, PlateGeometry, Regime, ResponseModel, QUOTED_B,
};

use crate::config::{Axis, GridConfig, ScenarioConfig};
use crate::output::{column, Cell, Table};
use crate::CliError;

/// Settings shared by every subcommand.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Overrides the configured relative tolerance.
    pub rel_tol: Option<f64>,
    /// Test hook: scales every computed kernel.
    pub normalization: Option<f64>,
}

impl Options {
    pub fn spec(&self, base: QuadratureSpec) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec {
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            ..base
        };
        spec.validate().map(|_| spec).map_err(CliError::invalid_config)
    }

    pub fn evaluator(&self, base: QuadratureSpec) -> Result<KernelEvaluator, CliError> {
        let eval = KernelEvaluator::new(self.spec(base)?)?;
        Ok(match self.normalization {
            Some(f) => eval.with_normalization(f),
            None => eval,
        })
    }
}

/// First error in index order, so failures are reported deterministically.
fn ordered<T: Send>(results: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    results.into_iter().collect()
}

fn grid_points(grid: &GridConfig) -> Vec<(f64, f64)> {
    let ws = grid.omega.values();
    grid.q
        .values()
        .into_iter()
        .flat_map(|q| ws.iter().map(move |&w| (q, w)))
        .collect()
}

/// Kernels at `(q, omega)` points, q-major. Columns: q, omega, Q^2, region,
/// then real and imaginary parts of both kernels or `DIVERGENT`.
pub fn kernel_table(separation: Separation, points: &[(f64, f64)], eval: &KernelEvaluator) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        column("q", "1/m"),
        column("omega", "rad/s"),
        column("Q2", "1/m^2"),
        column("region", "-"),
        column("re_a_plus", "1/m^5"),
        column("im_a_plus", "1/m^5"),
        column("re_a_minus", "1/m^5"),
        column("im_a_minus", "1/m^5"),
    ]);
    if points.is_empty() {
        return Ok(table);
    }
    let kernel_points: Vec<KernelPoint> = points.iter().map(|&(q, w)| KernelPoint::si(q, w, separation)).collect();
    for p in &kernel_points {
        p.validate().map_err(CliError::invalid_config)?;
    }
    // One continuation table serves every region IIa point.
    let needs_table = kernel_points
        .iter()
        .any(|p| classify_region(p) == vacresp_core::Region::IIa && separation.finite().is_some());
    let eval = if needs_table && eval.table().is_none() {
        eval.clone().with_continuation()?
    } else {
        eval.clone()
    };
    let rows = ordered(
        kernel_points
            .par_iter()
            .map(|p| {
                let pair = eval.pair(p)?;
                let mut row = vec![
                    Cell::Number(p.q),
                    Cell::Number(p.omega),
                    Cell::Number(p.q2()),
                    Cell::text(classify_region(p).label()),
                ];
                for v in [pair.a_plus, pair.a_minus] {
                    match v {
                        KernelValue::Finite { re, im } => row.extend([Cell::Number(re), Cell::Number(im)]),
                        KernelValue::Divergent => row.extend([Cell::Divergent, Cell::Divergent]),
                    }
                }
                Ok(row)
            })
            .collect(),
    )?;
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

/// Kernel points from the configured grid.
pub fn configured_points(config: &ScenarioConfig) -> Result<Vec<(f64, f64)>, CliError> {
    match &config.grid {
        Some(g) => Ok(grid_points(g)),
        None => Err(CliError::config("no [grid] section and no --q/--omega point".into())),
    }
}

/// Region labels on a `(q, omega)` grid at separation `h` (m).
pub fn region_map(h: f64, q: &Axis, omega: &Axis) -> Result<Table, CliError> {
    let separation = Separation::Finite(h);
    separation.validate().map_err(CliError::invalid_config)?;
    let mut table = Table::new(vec![
        column("q", "1/m"),
        column("omega", "rad/s"),
        column("region", "-"),
    ]);
    let points = grid_points(&GridConfig { q: *q, omega: *omega });
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(q, w)| {
            let label = classify_region(&KernelPoint::si(q, w, separation)).label();
            vec![Cell::Number(q), Cell::Number(w), Cell::text(label)]
        })
        .collect();
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

struct Report {
    table: Table,
}

impl Report {
    fn new() -> Self {
        Self {
            table: Table::new(vec![
                column("quantity", "-"),
                column("value", "per row"),
                column("unit", "-"),
                column("regime", "-"),
                column("note", "-"),
            ]),
        }
    }

    fn row(&mut self, quantity: &str, value: f64, unit: &str, regime: &str, note: &str) {
        self.table.push(vec![
            Cell::text(quantity),
            Cell::Number(value),
            Cell::text(unit),
            Cell::text(regime),
            Cell::text(note),
        ]);
    }
}

fn scenario_plates(config: &ScenarioConfig) -> Result<Vec<CorrugationSpec>, CliError> {
    let plates = config.corrugations()?;
    if plates.is_empty() {
        return Err(CliError::config(
            "the scenario needs at least one [[corrugation]]".into(),
        ));
    }
    Ok(plates)
}

/// Every observable the configuration supports, one per row.
pub fn scenario(config: &ScenarioConfig, model: &ResponseModel) -> Result<Table, CliError> {
    let geometry = config.geometry()?;
    let plates = scenario_plates(config)?;
    let material = config
        .material()?
        .ok_or_else(|| CliError::config("the scenario needs a [material] section".into()))?;
    let mass = material.plate_mass(geometry.area);
    let low = Regime::LowFrequency.label();
    let mut r = Report::new();
    r.row("plate_mass", mass, "kg", "-", "density x thickness x area");
    for (i, c) in plates.iter().enumerate() {
        let n = i + 1;
        let single = mass_correction_single(c, geometry.area);
        r.row(
            &format!("dm_par_single_plate_{n}"),
            single.dm_par,
            "kg",
            low,
            "closed form, single plate",
        );
        r.row(
            &format!("dm_perp_single_plate_{n}"),
            single.dm_perp,
            "kg",
            low,
            "closed form, single plate",
        );
        r.row(
            &format!("dm_over_m_single_plate_{n}"),
            single.dm_par / mass,
            "1",
            low,
            "relative to the plate mass",
        );
        if let Separation::Finite(h) = geometry.separation {
            let kernel = model.mass_correction_kernel(c, &geometry)?;
            let closed = mass_correction_two_plate(c, geometry.area, geometry.separation);
            r.row(&format!("kh_plate_{n}"), c.wavenumber() * h, "1", "-", "");
            r.row(
                &format!("dm_par_two_plate_kernel_{n}"),
                kernel.dm_par,
                "kg",
                low,
                "from the kernel slope at any kH",
            );
            r.row(
                &format!("dm_perp_two_plate_kernel_{n}"),
                kernel.dm_perp,
                "kg",
                low,
                "from the kernel slope at any kH",
            );
            r.row(
                &format!("dm_par_two_plate_closed_form_{n}"),
                closed.dm_par,
                "kg",
                low,
                "small-kH form with B = -0.453",
            );
        }
    }
    let drive = config.drive.unwrap_or_default();
    if let Some(w) = drive.omega {
        r.row("drive_omega", w, "rad/s", "-", "");
        for (i, c) in plates.iter().enumerate() {
            let n = i + 1;
            let other = plates.get(1 - i.min(1)).filter(|_| plates.len() == 2);
            let chi = model.response_tensor(c, other, &geometry, w)?;
            let (eta_par, eta_perp) = chi.viscosity();
            let regime = Regime::of(w, c.wavenumber()).label();
            r.row(&format!("chi_par_re_{n}"), chi.parallel.re, "N/m", regime, "");
            r.row(&format!("chi_par_im_{n}"), chi.parallel.im, "N/m", regime, "");
            r.row(&format!("chi_perp_re_{n}"), chi.perpendicular.re, "N/m", regime, "");
            r.row(&format!("chi_perp_im_{n}"), chi.perpendicular.im, "N/m", regime, "");
            r.row(&format!("eta_par_{n}"), eta_par, "kg/s", regime, "Im chi / omega");
            r.row(&format!("eta_perp_{n}"), eta_perp, "kg/s", regime, "Im chi / omega");
            r.row(
                &format!("eta_par_fast_drive_{n}"),
                shear_viscosity_asymptotic(c, geometry.area, w),
                "kg/s",
                Regime::Dissipative.label(),
                "omega >> ck asymptote",
            );
            r.row(
                &format!("decay_time_{n}"),
                decay_time(mass, eta_par)?,
                "s",
                regime,
                "2M / eta",
            );
        }
    }
    if let (Some(h), [c1, c2]) = (geometry.separation.finite(), plates.as_slice()) {
        let f = model.residual_force(c1, Some(c2), &geometry)?;
        r.row("residual_force_x", f[0], "N", low, "static lateral force on plate 1");
        r.row("residual_force_y", f[1], "N", low, "static lateral force on plate 1");
        let same_k = (c1.wavevector[0] - c2.wavevector[0]).abs() <= 1e-12 * c1.wavenumber()
            && (c1.wavevector[1] - c2.wavevector[1]).abs() <= 1e-12 * c1.wavenumber();
        if same_k {
            let j = model.josephson(
                c1.wavevector,
                c1.amplitude,
                c2.amplitude,
                geometry.area,
                Separation::Finite(h),
            )?;
            let alpha = c2.phase - c1.phase;
            r.row("josephson_phase", alpha, "rad", low, "alpha2 - alpha1");
            r.row("josephson_energy_scale", j.energy_scale, "J", low, "");
            r.row(
                "static_energy",
                j.static_energy(alpha),
                "J",
                low,
                "minimal at alpha = pi",
            );
            r.row("dc_force_magnitude", j.force_scale() * alpha.sin().abs(), "N", low, "");
            if let Some(v) = drive.velocity {
                j.ac_force(v, alpha, &[0.0])?;
                let kv = c1.wavevector[0] * v[0] + c1.wavevector[1] * v[1];
                r.row("ac_frequency", kv.abs(), "rad/s", low, "k.v");
                r.row("ac_force_amplitude", j.force_scale(), "N", low, "");
            }
        }
    }
    if let (Some(_), Some(sigma)) = (geometry.separation.finite(), material.surface_tension) {
        capillary_rows(&mut r, geometry.separation, sigma)?;
        r.row(
            "two_plate_coefficient_kernel",
            model.two_plate_coefficient()?,
            "1",
            low,
            "B from the kernel slope",
        );
        r.row(
            "two_plate_coefficient_quoted",
            QUOTED_B,
            "1",
            low,
            "quoted small-kH value",
        );
    }
    Ok(r.table)
}

fn capillary_rows(r: &mut Report, separation: Separation, sigma: f64) -> Result<(), CliError> {
    let cap = capillary_corrections(separation, sigma)?;
    let low = Regime::LowFrequency.label();
    r.row("delta_rho", cap.delta_rho, "kg/m^2", low, "B = -0.453");
    r.row("delta_sigma", cap.delta_sigma, "N/m", low, "B = -0.453");
    r.row(
        "capillary_speed_shift",
        cap.relative_speed_shift,
        "1",
        low,
        "d(c_s)/c_s",
    );
    Ok(())
}

/// Capillary-wave corrections for a film under a plate.
pub fn capillary(config: &ScenarioConfig) -> Result<Table, CliError> {
    let geometry = config.geometry()?;
    let sigma = config
        .material()?
        .and_then(|m| m.surface_tension)
        .ok_or_else(|| CliError::config("capillary needs material.surface_tension".into()))?;
    let mut r = Report::new();
    capillary_rows(&mut r, geometry.separation, sigma)?;
    Ok(r.table)
}

fn josephson_pair(config: &ScenarioConfig) -> Result<(PlateGeometry, CorrugationSpec, CorrugationSpec), CliError> {
    let geometry = config.geometry()?;
    match config.corrugations()?.as_slice() {
        [a, b] if geometry.separation.finite().is_some() => Ok((geometry, *a, *b)),
        _ => Err(CliError::config(
            "josephson needs two [[corrugation]] plates at a finite separation".into(),
        )),
    }
}

/// Static energy and force over a phase grid, or with `ac` the force trace of
/// plate 1 sliding at the configured velocity over `periods` periods.
pub fn josephson(
    config: &ScenarioConfig,
    model: &ResponseModel,
    points: usize,
    ac: bool,
    periods: f64,
) -> Result<Table, CliError> {
    let (geometry, c1, c2) = josephson_pair(config)?;
    let j = model.josephson(
        c1.wavevector,
        c1.amplitude,
        c2.amplitude,
        geometry.area,
        geometry.separation,
    )?;
    if ac {
        let v = config
            .drive
            .and_then(|d| d.velocity)
            .ok_or_else(|| CliError::config("josephson --ac needs drive.velocity".into()))?;
        let kv = (c1.wavevector[0] * v[0] + c1.wavevector[1] * v[1]).abs();
        if kv == 0.0 {
            return Err(CliError::config("the sliding velocity is perpendicular to k".into()));
        }
        let dt = periods * 2.0 * PI / kv / points.max(1) as f64;
        let times: Vec<f64> = (0..points).map(|i| i as f64 * dt).collect();
        let forces = j.ac_force(v, c2.phase - c1.phase, &times)?;
        let mut t = Table::new(vec![column("t", "s"), column("force_x", "N"), column("force_y", "N")]);
        for (time, f) in times.iter().zip(forces) {
            t.push(vec![Cell::Number(*time), Cell::Number(f[0]), Cell::Number(f[1])]);
        }
        return Ok(t);
    }
    let mut t = Table::new(vec![
        column("alpha", "rad"),
        column("energy", "J"),
        column("force_x", "N"),
        column("force_y", "N"),
    ]);
    for i in 0..points {
        let alpha = 2.0 * PI * i as f64 / points as f64;
        let f = j.dc_force(alpha);
        t.push(vec![
            Cell::Number(alpha),
            Cell::Number(j.static_energy(alpha)),
            Cell::Number(f[0]),
            Cell::Number(f[1]),
        ]);
    }
    Ok(t)
}

/// Runs the oracle groups concurrently; reports sorted by name.
pub fn oracle(eval: &KernelEvaluator) -> Vec<OracleReport> {
    let mut reports: Vec<OracleReport> = OracleGroup::ALL
        .par_iter()
        .flat_map_iter(|&g| run_group(g, eval))
        .collect();
    sort_reports(&mut reports);
    reports
}

pub fn oracle_table(reports: &[OracleReport]) -> Table {
    let mut t = Table::new(vec![
        column("name", "-"),
        column("reference_value", "1"),
        column("test_value", "1"),
        column("rel_error", "1"),
        column("tolerance", "1"),
        column("passed", "-"),
    ]);
    for r in reports {
        t.push(vec![
            Cell::text(&r.name),
            Cell::Number(r.reference_value),
            Cell::Number(r.test_value),
            Cell::Number(r.rel_error),
            Cell::Number(r.tolerance),
            Cell::text(if r.passed { "PASS" } else { "FAIL" }),
        ]);
    }
    t
}

pub fn oracle_json(reports: &[OracleReport]) -> Value {
    let number = |x: f64| {
        if x.is_finite() {
            json!(x)
        } else {
            json!(crate::output::format_number(x))
        }
    };
    let checks: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "reference_value": number(r.reference_value),
                "test_value": number(r.test_value),
                "rel_error": number(r.rel_error),
                "tolerance": number(r.tolerance),
                "passed": r.passed,
            })
        })
        .collect();
    json!({
        "passed": reports.iter().all(|r| r.passed),
        "units": "natural (hbar = c = 1); SI observables as ratios",
        "checks": checks,
    })
}
