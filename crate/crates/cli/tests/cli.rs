use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use approx::assert_relative_eq;
use vacresp_core::units::C;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn vacresp(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vacresp")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scenario_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("scenario.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

/// `quantity -> value` from a scenario report.
fn quantity(report: &str, name: &str) -> f64 {
    let mut rows = csv::Reader::from_reader(report.as_bytes());
    for r in rows.records() {
        let r = r.unwrap();
        if &r[0] == name {
            return r[1].parse().unwrap();
        }
    }
    panic!("no {name} in report:\n{report}");
}

fn records(csv_text: &str) -> Vec<Vec<String>> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

const SINGLE: &str = "units = \"SI\"\n[geometry]\narea = 1e-4\nseparation = \"infinite\"\n";

#[test]
fn kernel_point_on_single_plate_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, SINGLE);
    let (q, w) = (2e3, 0.5 * C * 2e3);
    let run = vacresp(&["--config", &cfg, "kernel", "--q", "2e3", "--omega", &w.to_string()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = records(&run.stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], "I");
    let q2 = q * q - (w / C) * (w / C);
    let exact = -q2.powf(2.5) / (360.0 * PI * PI);
    assert_relative_eq!(rows[0][4].parse::<f64>().unwrap(), exact, max_relative = 1e-8);
    assert_eq!(rows[0][6].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn kernel_grid_across_resonance_marks_divergent_cells() {
    let run = vacresp(&["--config", scenario_file("sliding.toml").to_str().unwrap(), "kernel"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = records(&run.stdout);
    assert_eq!(rows.len(), 25);
    for r in &rows {
        let divergent = r[4] == "DIVERGENT";
        assert_eq!(divergent, r[3] == "IIb");
        if !divergent {
            assert!(r[4..].iter().all(|x| x.parse::<f64>().unwrap().is_finite()));
        }
    }
    assert!(rows.iter().any(|r| r[3] == "IIa"));
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        &format!("{SINGLE}[grid]\nq = {{ min = 0.0, max = 1.0, points = 0 }}\nomega = {{ min = 0.0, max = 1.0, points = 4 }}\n"),
    );
    let run = vacresp(&["--config", &cfg, "kernel"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().count(), 1);
    assert!(run.stdout.starts_with("q [1/m],omega [rad/s],Q2 [1/m^2],region [-]"));
}

/// Lowest `omega` at `q = 0` labelled IIb.
fn onset(h: f64, omega_max: f64) -> (f64, f64) {
    let run = vacresp(&[
        "region-map",
        "--separation",
        &h.to_string(),
        "--q-max",
        "10",
        "--omega-max",
        &omega_max.to_string(),
    ]);
    assert_eq!(run.code, 0);
    let rows = records(&run.stdout);
    assert_eq!(rows.len(), 200 * 200);
    let first = rows
        .iter()
        .filter(|r| r[0].parse::<f64>().unwrap() == 0.0)
        .find(|r| r[2] == "IIb")
        .unwrap();
    (first[1].parse().unwrap(), omega_max / 199.0)
}

#[test]
fn region_map_onset_follows_lowest_optical_mode() {
    let wmax = 2.0 * PI * C;
    let (w1, cell) = onset(1.0, wmax);
    assert!((w1 - PI * C).abs() <= cell, "{w1}");
    let (w2, _) = onset(2.0, wmax);
    assert!((w2 - 0.5 * w1).abs() <= cell);
}

#[test]
fn macroscopic_plate_reproduces_quoted_estimates() {
    let run = vacresp(&[
        "--config",
        scenario_file("macroscopic.toml").to_str().unwrap(),
        "scenario",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let ratio = quantity(&run.stdout, "dm_over_m_single_plate_1");
    assert!(ratio > 1e-34 / 3.0 && ratio < 3e-34, "{ratio}");
    assert!(quantity(&run.stdout, "decay_time_1") >= 1e18);
}

#[test]
fn mercury_capillary_shift() {
    let run = vacresp(&["--config", scenario_file("mercury.toml").to_str().unwrap(), "capillary"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let shift = quantity(&run.stdout, "capillary_speed_shift").abs();
    assert!(shift > 1e-19 / 3.0 && shift < 3e-19, "{shift}");
}

#[test]
fn flat_plates_have_no_observables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "units = \"SI\"\n[geometry]\narea = 1e-4\nseparation = 1e-4\n\
         [[corrugation]]\namplitude = 0.0\nwavevector = [1e4, 0.0]\n\
         [[corrugation]]\namplitude = 0.0\nwavevector = [1e4, 0.0]\nphase = 1.0\n\
         [material]\ndensity = 2000.0\nthickness = 1e-3\n[drive]\nomega = 1e12\nvelocity = [1.0, 0.0]\n",
    );
    let run = vacresp(&["--config", &cfg, "scenario"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let mut seen = 0;
    for r in records(&run.stdout) {
        let value: f64 = r[1].parse().unwrap();
        match r[0].as_str() {
            "plate_mass" | "drive_omega" | "josephson_phase" | "ac_frequency" => {}
            name if name.starts_with("kh_") => {}
            name if name.starts_with("decay_time") => assert_eq!(value, f64::INFINITY),
            name => {
                assert_eq!(value, 0.0, "{name}");
                seen += 1;
            }
        }
    }
    assert!(seen > 20);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cfg = scenario_file("sliding.toml");
    let cfg = cfg.to_str().unwrap();
    for cmd in [
        ["kernel", "--format", "csv"],
        ["kernel", "--format", "json"],
        ["scenario", "--format", "json"],
    ] {
        let one = vacresp(&[&["--config", cfg, "--threads", "1"][..], &cmd[..]].concat());
        let many = vacresp(&[&["--config", cfg, "--threads", "4"][..], &cmd[..]].concat());
        assert_eq!(one.code, 0);
        assert_eq!(one.stdout, many.stdout);
    }
}

#[test]
fn oracle_report_passes_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.json");
    let run = vacresp(&["oracle", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() > 30);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn perturbed_normalization_fails_the_oracle() {
    let run = vacresp(&["oracle", "--perturb-normalization", "1.0001"]);
    assert_eq!(run.code, 5);
    assert!(run.stdout.contains("FAIL"));
}

#[test]
fn bad_configuration_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "units = \"SI\"\n[geometry]\narea = 0.0\nseparation = 1.0\n");
    let run = vacresp(&["--config", &cfg, "scenario"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("area"), "{}", run.stderr);
    assert_eq!(vacresp(&["--config", "/nonexistent.toml", "scenario"]).code, 2);
    assert_eq!(vacresp(&["scenario"]).code, 2);
    assert_eq!(vacresp(&["oracle", "--rel-tol", "-1"]).code, 2);
}

#[test]
fn resonant_drive_exits_with_code_four() {
    let dir = tempfile::tempdir().unwrap();
    let h: f64 = 1e-5;
    let threshold = C * (1e8 + (PI / h) * (PI / h)).sqrt();
    let cfg = write_config(
        &dir,
        &format!(
            "units = \"SI\"\n[geometry]\narea = 1e-4\nseparation = {h}\n\
             [[corrugation]]\namplitude = 1e-7\nwavevector = [1e4, 0.0]\n\
             [material]\ndensity = 2000.0\nthickness = 1e-3\n[drive]\nomega = {}\n",
            threshold * 1.5
        ),
    );
    let run = vacresp(&["--config", &cfg, "scenario"]);
    assert_eq!(run.code, 4, "{}", run.stderr);
}

#[test]
fn josephson_tables() {
    let cfg = scenario_file("sliding.toml");
    let cfg = cfg.to_str().unwrap();
    let dc = vacresp(&["--config", cfg, "josephson", "--points", "8"]);
    assert_eq!(dc.code, 0, "{}", dc.stderr);
    let rows = records(&dc.stdout);
    assert_eq!(rows.len(), 8);
    let energy: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let min = energy.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(energy[4], min);
    let ac = vacresp(&["--config", cfg, "josephson", "--ac", "--points", "64"]);
    assert_eq!(ac.code, 0, "{}", ac.stderr);
    assert_eq!(records(&ac.stdout).len(), 64);

    let dir = tempfile::tempdir().unwrap();
    let fast = std::fs::read_to_string(cfg)
        .unwrap()
        .replace("velocity = [1e-3, 0.0]", "velocity = [1e7, 0.0]");
    let fast = write_config(&dir, &fast);
    assert_eq!(vacresp(&["--config", &fast, "josephson", "--ac"]).code, 2);
}
