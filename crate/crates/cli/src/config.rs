//! Scenario files: a TOML tree with every quantity in SI units.
//!
//! ```toml
//! units = "SI"
//!
//! [geometry]
//! area = 1e-4            # m^2
//! separation = 1e-3      # m, or "infinite"
//!
//! [[corrugation]]
//! amplitude = 1e-3       # m
//! wavevector = [6283.185307179586, 0.0]  # 1/m
//! phase = 0.0            # rad
//!
//! [material]
//! density = 15000.0      # kg/m^3
//! thickness = 1e-3       # m
//! surface_tension = 0.5  # N/m, optional
//!
//! [drive]
//! omega = 3.8e12         # rad/s, optional
//! velocity = [1.0, 0.0]  # m/s, optional
//!
//! [grid]
//! q = { min = 0.0, max = 1e4, points = 50 }          # 1/m
//! omega = { min = 0.0, max = 3e12, points = 50 }     # rad/s
//!
//! [tolerances]
//! rel_tol = 1e-8
//! ```

use serde::{Deserialize, Serialize};
use vacresp_core::kernels::Separation;
use vacresp_core::quadrature::QuadratureSpec;
use vacresp_core::response::{CorrugationSpec, MaterialSpec, PlateGeometry};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Units {
    SI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unbounded {
    Infinite,
}

/// Plate separation in metres, or `"infinite"` for a single plate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeparationConfig {
    Length(f64),
    Named(Unbounded),
}

impl SeparationConfig {
    pub fn separation(self) -> Separation {
        match self {
            SeparationConfig::Length(h) => Separation::Finite(h),
            SeparationConfig::Named(Unbounded::Infinite) => Separation::Infinite,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub area: f64,
    pub separation: SeparationConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrugationConfig {
    pub amplitude: f64,
    pub wavevector: [f64; 2],
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub density: f64,
    pub thickness: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_tension: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<[f64; 2]>,
}

/// Evenly spaced samples; `points = 0` is an empty axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn step(&self) -> f64 {
        if self.points < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.points - 1) as f64
        }
    }

    fn validate(&self, what: &str) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min || self.min < 0.0 {
            return Err(CliError::config(format!(
                "grid axis `{what}` needs finite 0 <= min <= max"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub q: Axis,
    pub omega: Axis,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let s = QuadratureSpec::default();
        Self {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            max_subdivisions: s.max_subdivisions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub units: Units,
    pub geometry: GeometryConfig,
    #[serde(default, rename = "corrugation", skip_serializing_if = "Vec::is_empty")]
    pub corrugations: Vec<CorrugationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

impl ScenarioConfig {
    /// Parse and validate.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always representable")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.geometry()?;
        if self.corrugations.len() > 2 {
            return Err(CliError::config("at most two corrugated plates".into()));
        }
        self.corrugations()?;
        self.material()?;
        if let Some(d) = &self.drive {
            if d.omega.is_some_and(|w| !(w.is_finite() && w >= 0.0)) {
                return Err(CliError::config("drive omega must be finite and nonnegative".into()));
            }
            if d.velocity.is_some_and(|v| !v.iter().all(|x| x.is_finite())) {
                return Err(CliError::config("drive velocity must be finite".into()));
            }
        }
        if let Some(g) = &self.grid {
            g.q.validate("q")?;
            g.omega.validate("omega")?;
        }
        self.quadrature()?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<PlateGeometry, CliError> {
        PlateGeometry::new(self.geometry.area, self.geometry.separation.separation()).map_err(CliError::invalid_config)
    }

    pub fn corrugations(&self) -> Result<Vec<CorrugationSpec>, CliError> {
        self.corrugations
            .iter()
            .map(|c| CorrugationSpec::new(c.amplitude, c.wavevector, c.phase).map_err(CliError::invalid_config))
            .collect()
    }

    pub fn material(&self) -> Result<Option<MaterialSpec>, CliError> {
        self.material
            .map(|m| {
                let spec = MaterialSpec {
                    density: m.density,
                    thickness: m.thickness,
                    surface_tension: m.surface_tension,
                };
                spec.validate().map(|_| spec).map_err(CliError::invalid_config)
            })
            .transpose()
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec {
            rel_tol: self.tolerances.rel_tol,
            abs_tol: self.tolerances.abs_tol,
            max_subdivisions: self.tolerances.max_subdivisions,
        };
        spec.validate().map(|_| spec).map_err(CliError::invalid_config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
units = "SI"

[geometry]
area = 1e-4
separation = 1e-3

[[corrugation]]
amplitude = 1e-3
wavevector = [6283.185307179586, 0.0]

[[corrugation]]
amplitude = 2e-3
wavevector = [6283.185307179586, 0.0]
phase = 1.25

[material]
density = 15000.0
thickness = 1e-3
surface_tension = 0.5

[drive]
omega = 3.8e12
velocity = [0.1, 0.2]

[grid]
q = { min = 0.0, max = 1e4, points = 7 }
omega = { min = 0.0, max = 3e12, points = 0 }

[tolerances]
rel_tol = 1e-9
"#;

    #[test]
    fn round_trip_is_lossless() {
        let a = ScenarioConfig::parse(FULL).unwrap();
        let b = ScenarioConfig::parse(&a.to_toml()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.tolerances.max_subdivisions,
            QuadratureSpec::default().max_subdivisions
        );
        let minimal =
            ScenarioConfig::parse("units = \"SI\"\n[geometry]\narea = 1.0\nseparation = \"infinite\"\n").unwrap();
        assert_eq!(minimal, ScenarioConfig::parse(&minimal.to_toml()).unwrap());
        assert_eq!(minimal.geometry().unwrap().separation, Separation::Infinite);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            "units = \"CGS\"\n[geometry]\narea = 1.0\nseparation = 1.0\n",
            "[geometry]\narea = 1.0\nseparation = 1.0\n",
            "units = \"SI\"\n[geometry]\narea = -1.0\nseparation = 1.0\n",
            "units = \"SI\"\n[geometry]\narea = 1.0\nseparation = \"far\"\n",
            "units = \"SI\"\n[geometry]\narea = 1.0\nseparation = 1.0\ncolour = 3\n",
            "units = \"SI\"\n[geometry]\narea = 1.0\nseparation = 1.0\n[tolerances]\nrel_tol = 0.0\n",
        ] {
            let err = ScenarioConfig::parse(bad).unwrap_err();
            assert_eq!(err.code, crate::exit::CONFIG, "{bad}");
        }
    }

    #[test]
    fn axis_values() {
        let a = Axis {
            min: 1.0,
            max: 2.0,
            points: 3,
        };
        assert_eq!(a.values(), vec![1.0, 1.5, 2.0]);
        assert!(Axis {
            min: 0.0,
            max: 1.0,
            points: 0
        }
        .values()
        .is_empty());
    }
}
