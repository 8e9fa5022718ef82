//! Strict JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::mesh::{generate_box_mesh, load_mesh, uniform_coords, Mesh};
use crate::model::{Integrator, ModelParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSource {
    /// Rectilinear box: either `extents` with `cells`, or explicit `coords`.
    Box(BoxSpec),
    /// PFVM-MESH file, relative paths resolved against the config file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extents: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<[Vec<f64>; 3]>,
}

impl BoxSpec {
    pub fn uniform(extents: [f64; 3], cells: [usize; 3]) -> Self {
        BoxSpec {
            extents: Some(extents),
            cells: Some(cells),
            coords: None,
        }
    }

    pub fn coordinates(&self) -> Result<[Vec<f64>; 3]> {
        match (&self.extents, &self.cells, &self.coords) {
            (Some(e), Some(n), None) => {
                for a in 0..3 {
                    if !(e[a] > 0.0 && e[a].is_finite()) {
                        return Err(Error::config("mesh.box.extents", "extents must be positive"));
                    }
                    if n[a] == 0 {
                        return Err(Error::config("mesh.box.cells", "cell counts must be positive"));
                    }
                }
                Ok(std::array::from_fn(|a| uniform_coords(e[a], n[a])))
            }
            (None, None, Some(c)) => Ok(c.clone()),
            _ => Err(Error::config(
                "mesh.box",
                "give either `extents` and `cells`, or `coords`",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryConfig {
    #[default]
    Homogeneous,
    Constant {
        u: f64,
        p: f64,
    },
    /// Boundary values of the manufactured solution.
    Mms,
}

fn default_radius() -> f64 {
    0.25
}
fn default_undercooling() -> f64 {
    -1.0
}
fn default_front() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// Solid ball (`p ≈ 1`) in undercooled liquid, tanh profile across the interface.
    SphericalNucleus {
        /// Defaults to the center of the mesh bounding box.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec3>,
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default = "default_undercooling")]
        u: f64,
    },
    /// Solid for `x_axis < position`, tanh profile across the plane.
    PlanarFront {
        #[serde(default)]
        axis: usize,
        #[serde(default = "default_front")]
        position: f64,
        #[serde(default = "default_undercooling")]
        u: f64,
    },
    /// Manufactured solution at `t = 0`.
    Mms,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::SphericalNucleus {
            center: None,
            radius: default_radius(),
            u: default_undercooling(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ForcingConfig {
    #[default]
    None,
    Mms,
}

fn default_safety() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum DtPolicy {
    Stable {
        #[serde(default = "default_safety")]
        safety: f64,
    },
    Fixed {
        value: f64,
    },
}

impl Default for DtPolicy {
    fn default() -> Self {
        DtPolicy::Stable {
            safety: default_safety(),
        }
    }
}

fn default_one() -> usize {
    1
}
fn default_output() -> PathBuf {
    PathBuf::from("output")
}
fn default_levels() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mesh: MeshSource,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
    pub t_final: f64,
    #[serde(default)]
    pub dt: DtPolicy,
    #[serde(default)]
    pub integrator: Integrator,
    /// Write a field snapshot every this many steps (and always at the end).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    /// Record a ledger row every this many steps.
    #[serde(default = "default_one")]
    pub ledger_every: usize,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_levels")]
    pub study_levels: usize,
    /// Recorded for provenance; the solver itself is deterministic.
    #[serde(default)]
    pub seed: u64,
    /// Directory relative paths are resolved against; not part of the document.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::config("t_final", "must be finite and nonnegative"));
        }
        match self.dt {
            DtPolicy::Stable { safety } if !(safety > 0.0 && safety <= 1.0) => {
                return Err(Error::config("dt.safety", "must lie in (0, 1]"));
            }
            DtPolicy::Fixed { value } if !(value > 0.0 && value.is_finite()) => {
                return Err(Error::config("dt.value", "must be positive"));
            }
            _ => {}
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::config("snapshot_every", "must be at least 1"));
        }
        if self.ledger_every == 0 {
            return Err(Error::config("ledger_every", "must be at least 1"));
        }
        if self.study_levels == 0 {
            return Err(Error::config("study_levels", "must be at least 1"));
        }
        match &self.initial {
            InitialConfig::SphericalNucleus { radius, u, center } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::config("initial.radius", "must be positive"));
                }
                if !u.is_finite() || center.is_some_and(|c| c.iter().any(|v| !v.is_finite())) {
                    return Err(Error::config("initial", "values must be finite"));
                }
            }
            InitialConfig::PlanarFront { axis, position, u } => {
                if *axis > 2 {
                    return Err(Error::config("initial.axis", "must be 0, 1 or 2"));
                }
                if !(position.is_finite() && u.is_finite()) {
                    return Err(Error::config("initial", "values must be finite"));
                }
            }
            InitialConfig::Mms => {}
        }
        if let MeshSource::Box(b) = &self.mesh {
            b.coordinates()?;
        }
        Ok(())
    }

    /// Builds the configured mesh.
    pub fn build_mesh(&self) -> Result<Mesh> {
        match &self.mesh {
            MeshSource::Box(b) => generate_box_mesh(b.coordinates()?),
            MeshSource::File(p) => load_mesh(self.resolve(p)),
        }
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a configuration document.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a configuration file; relative paths inside it resolve against its directory.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = parse_config_str(&text)?;
    cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [4, 4, 4]}}, "t_final": 0.1}"#;

    #[test]
    fn minimal_gets_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.dt, DtPolicy::Stable { safety: 0.5 });
        assert_eq!(c.integrator, Integrator::Rk4);
        assert_eq!(c.params, ModelParams::default());
        assert_eq!(c.ledger_every, 1);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [4, 4, 4]}}, "t_final": 0.1,
            "params": {"xii": 0.1}}"#;
        let err = parse_config_str(text).unwrap_err().to_string();
        assert!(err.contains("params") && err.contains("xii"), "{err}");
    }

    #[test]
    fn limiter_order_violation_names_keys() {
        let text = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [4, 4, 4]}}, "t_final": 0.1,
            "params": {"limiter": {"h_inf": -4, "h0": 1.5, "h1": 1.0, "h_sup": 4}}}"#;
        let err = parse_config_str(text).unwrap_err().to_string();
        assert!(err.contains("h0") && err.contains("h1"), "{err}");
    }

    #[test]
    fn round_trip() {
        let text = r#"{"mesh": {"box": {"coords": [[0, 0.25, 1], [0, 1], [0, 0.5, 1]]}}, "t_final": 0.2,
            "initial": {"type": "planar_front", "axis": 1}, "dt": {"policy": "fixed", "value": 0.001},
            "integrator": "explicit_euler", "snapshot_every": 5, "boundary": {"type": "constant", "u": -0.5, "p": 0}}"#;
        let a = parse_config_str(text).unwrap();
        let b = parse_config_str(&a.to_json()).unwrap();
        assert_eq!(a, b);
    }
}
