//! Run configuration, read from and written to TOML.
//!
//! ```toml
//! [model]
//! kind = "burgers_riemann"
//! u_left = 2.0
//! u_right = 1.0
//!
//! [grid]
//! x_min = -1.0
//! x_max = 1.0
//! n_cells = 1600
//!
//! [solver]
//! final_time = 0.5
//!
//! [uq]
//! mode = "spline"
//! points = 16
//!
//! [output]
//! dir = "out"
//! prefix = "run"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::SolverSettings;
use crate::mesh::Grid1D;
use crate::models::ModelSpec;
use crate::splines::ShapeGoal;
use crate::uq::{collocation_nodes, Method, NodeRule, SplineKind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.x_min, self.x_max, self.n_cells)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gpc,
    Spline,
}

fn default_spline_kind() -> SplineKind {
    SplineKind::ShapePreserving
}

fn default_shape_goal() -> ShapeGoal {
    ShapeGoal::Monotonicity
}

fn default_quadrature_points() -> usize {
    10
}

fn default_surface_points() -> usize {
    201
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UqConfig {
    pub mode: Mode,
    /// Number of collocation nodes `L`.
    pub points: usize,
    /// Defaults to `gauss` for gPC and `uniform` for splines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_rule: Option<NodeRule>,
    #[serde(default = "default_spline_kind")]
    pub spline_kind: SplineKind,
    #[serde(default = "default_shape_goal")]
    pub shape_goal: ShapeGoal,
    /// Gauss points per knot interval for spline moments.
    #[serde(default = "default_quadrature_points")]
    pub quadrature_points: usize,
    /// Size of the equispaced `xi` grid for surfaces and slices.
    #[serde(default = "default_surface_points")]
    pub surface_points: usize,
    /// Spatial probe for slice output, snapped to the nearest cell center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_x: Option<f64>,
}

impl UqConfig {
    pub fn node_rule(&self) -> NodeRule {
        self.node_rule.unwrap_or(match self.mode {
            Mode::Gpc => NodeRule::Gauss,
            Mode::Spline => NodeRule::Uniform,
        })
    }

    pub fn method(&self) -> Method {
        match self.mode {
            Mode::Gpc => Method::Gpc,
            Mode::Spline => Method::spline(self.spline_kind, self.shape_goal),
        }
    }

    pub fn nodes(&self) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        collocation_nodes(self.node_rule(), self.points)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!("uq.points must be at least 2, got {}", self.points)));
        }
        let required = match (self.mode, self.spline_kind) {
            (Mode::Gpc, _) => NodeRule::Gauss,
            (Mode::Spline, kind) => {
                let min = if kind == SplineKind::Cubic { 4 } else { 3 };
                if self.points < min {
                    return Err(Error::Config(format!(
                        "{kind:?} splines need at least {min} points, got {}",
                        self.points
                    )));
                }
                NodeRule::Uniform
            }
        };
        if self.node_rule() != required {
            return Err(Error::Config(format!(
                "mode {:?} requires node_rule {:?}",
                self.mode, required
            )));
        }
        if self.quadrature_points == 0 {
            return Err(Error::Config("uq.quadrature_points must be positive".into()));
        }
        if self.surface_points < 2 {
            return Err(Error::Config("uq.surface_points must be at least 2".into()));
        }
        if let Some(x) = self.probe_x {
            if !x.is_finite() {
                return Err(Error::Config(format!("uq.probe_x must be finite, got {x}")));
            }
        }
        Ok(())
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_prefix() -> String {
    "run".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_prefix")]
    pub prefix: String,
    /// Also write the `(x, xi)` surface of every observable.
    #[serde(default)]
    pub surface: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            prefix: default_prefix(),
            surface: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub grid: GridConfig,
    pub solver: SolverSettings,
    pub uq: UqConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.solver.validate()?;
        self.uq.validate()?;
        if self.output.prefix.is_empty() || self.output.prefix.contains(['/', '\\']) {
            return Err(Error::Config(format!(
                "output.prefix must be a plain file-name stem, got {:?}",
                self.output.prefix
            )));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Grid1D> {
        self.grid.build()
    }

    /// Shock-oriented Burgers Riemann problem with a shape-preserving spline on 16
    /// uniform nodes; the starting point that command-line flags modify.
    pub fn burgers_default() -> Self {
        Self {
            model: ModelSpec::BurgersRiemann {
                u_left: 2.0,
                u_right: 1.0,
                jump_at: 0.0,
                jump_slope: 0.1,
            },
            grid: GridConfig {
                x_min: -1.0,
                x_max: 1.0,
                n_cells: 1600,
            },
            solver: SolverSettings::new(0.5),
            uq: UqConfig {
                mode: Mode::Spline,
                points: 16,
                node_rule: None,
                spline_kind: default_spline_kind(),
                shape_goal: default_shape_goal(),
                quadrature_points: default_quadrature_points(),
                surface_points: default_surface_points(),
                probe_x: Some(0.734),
            },
            output: OutputConfig::default(),
        }
    }
}
