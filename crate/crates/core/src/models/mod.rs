//! Concrete balance laws and the realization factory used by the collocation pipeline.

mod burgers;
mod shallow_water;

pub use burgers::{burgers_flux, BurgersModel};
pub use shallow_water::{
    desingularized_velocity, example2_bottom, sw_flux, ShallowWaterModel, Topography,
    DEFAULT_GRAVITY, DRY_DEPTH,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fv::Model;
use crate::mesh::{Grid1D, StateField};

/// A model instance and its initial state for one value of the random parameter.
pub struct Realization {
    pub model: Box<dyn Model>,
    pub initial: StateField,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BottomSpec {
    /// Cosine bump on `|x| < 0.2`, lifted by `0.125 xi`.
    #[default]
    Example2,
    /// `Z = 0`.
    Flat,
}

impl BottomSpec {
    pub fn eval(self, x: f64, xi: f64) -> f64 {
        match self {
            BottomSpec::Example2 => example2_bottom(x, xi),
            BottomSpec::Flat => 0.0,
        }
    }
}

fn default_jump_slope() -> f64 {
    0.1
}

fn default_gravity() -> f64 {
    DEFAULT_GRAVITY
}

/// Problem description parameterized by `xi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Burgers with `u_left` for `x < jump_at + jump_slope * xi`, `u_right` beyond.
    BurgersRiemann {
        u_left: f64,
        u_right: f64,
        #[serde(default)]
        jump_at: f64,
        #[serde(default = "default_jump_slope")]
        jump_slope: f64,
    },
    /// Burgers with `u0 = mean + amplitude sin(pi (x - phase_slope * xi))`.
    BurgersSine {
        mean: f64,
        amplitude: f64,
        #[serde(default)]
        phase_slope: f64,
    },
    /// Saint-Venant at rest with surface `w_left` / `w_right` split at `jump_at`.
    ShallowWater {
        #[serde(default = "default_gravity")]
        gravity: f64,
        w_left: f64,
        w_right: f64,
        #[serde(default)]
        jump_at: f64,
        #[serde(default)]
        bottom: BottomSpec,
    },
}

/// Exact average over `[a, b]` of a function equal to `left` below `at` and `right` above.
fn step_average(a: f64, b: f64, at: f64, left: f64, right: f64) -> f64 {
    if at <= a {
        right
    } else if at >= b {
        left
    } else {
        (left * (at - a) + right * (b - at)) / (b - a)
    }
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::BurgersRiemann { .. } => "burgers_riemann",
            ModelSpec::BurgersSine { .. } => "burgers_sine",
            ModelSpec::ShallowWater { .. } => "shallow_water",
        }
    }

    /// Cell-averaged initial data and the model for parameter value `xi`.
    pub fn realize(&self, grid: &Grid1D, xi: f64) -> Result<Realization> {
        let dx = grid.dx();
        let face = |j: usize| grid.interface(j as isize);
        match *self {
            ModelSpec::BurgersRiemann {
                u_left,
                u_right,
                jump_at,
                jump_slope,
            } => {
                let at = jump_at + jump_slope * xi;
                let initial = StateField::from_fn(*grid, 1, |j| {
                    vec![step_average(face(j), face(j) + dx, at, u_left, u_right)]
                });
                Ok(Realization {
                    model: Box::new(BurgersModel),
                    initial,
                })
            }
            ModelSpec::BurgersSine {
                mean,
                amplitude,
                phase_slope,
            } => {
                let shift = phase_slope * xi;
                let pi = std::f64::consts::PI;
                let initial = StateField::from_fn(*grid, 1, |j| {
                    let (a, b) = (face(j) - shift, face(j) + dx - shift);
                    vec![mean + amplitude * ((pi * a).cos() - (pi * b).cos()) / (pi * dx)]
                });
                Ok(Realization {
                    model: Box::new(BurgersModel),
                    initial,
                })
            }
            ModelSpec::ShallowWater {
                gravity,
                w_left,
                w_right,
                jump_at,
                bottom,
            } => {
                let topo = Topography::sample(grid, |x| bottom.eval(x, xi));
                let model = ShallowWaterModel::new(grid, gravity, topo);
                let initial = model.state_from_surface(grid, |j| {
                    (step_average(face(j), face(j) + dx, jump_at, w_left, w_right), 0.0)
                })?;
                Ok(Realization {
                    model: Box::new(model),
                    initial,
                })
            }
        }
    }
}
