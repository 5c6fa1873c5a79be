//! Saint-Venant system with bottom topography, discretized so that lake-at-rest states
//! are preserved and depths stay non-negative.
//!
//! The state is `(h, hu)`. The water surface `w = h + Z` is reconstructed instead of
//! `h`, then corrected cell by cell so that no interface depth goes negative.

use crate::error::{Error, Result};
use crate::fv::{limited_increment, Boundary, LocalSpeeds, Model, Observable, Reconstruction};
use crate::mesh::{Grid1D, StateField, N_GHOST};

/// Depths below this are dry for velocity purposes.
pub const DRY_DEPTH: f64 = 1e-14;

pub const DEFAULT_GRAVITY: f64 = 1.0;

/// Bottom of the second benchmark: a cosine bump on `|x| < 0.2` lifted by `0.125 xi`.
pub fn example2_bottom(x: f64, xi: f64) -> f64 {
    if x.abs() < 0.2 {
        0.125 * xi + 0.125 * ((5.0 * std::f64::consts::PI * x).cos() + 2.0)
    } else {
        0.125 * xi + 0.125
    }
}

/// Bottom sampled at interfaces; cell values are interface averages. Covers ghosts.
#[derive(Clone, Debug, PartialEq)]
pub struct Topography {
    iface: Vec<f64>,
    cell: Vec<f64>,
}

impl Topography {
    pub fn sample(grid: &Grid1D, bottom: impl Fn(f64) -> f64) -> Self {
        let n = grid.n_cells() as isize;
        let g = N_GHOST as isize;
        let iface: Vec<f64> = (-g..=n + g).map(|i| bottom(grid.interface(i))).collect();
        let cell = iface.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Self { iface, cell }
    }

    pub fn flat(grid: &Grid1D, level: f64) -> Self {
        Self::sample(grid, |_| level)
    }

    /// Bottom at interface `i` (left face of cell `i`).
    pub fn at_interface(&self, i: isize) -> f64 {
        self.iface[(i + N_GHOST as isize) as usize]
    }

    pub fn at_cell(&self, j: isize) -> f64 {
        self.cell[(j + N_GHOST as isize) as usize]
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            iface: self.iface.iter().map(|z| z + c).collect(),
            cell: self.cell.iter().map(|z| z + c).collect(),
        }
    }
}

/// Velocity that stays bounded as `h -> 0`.
pub fn desingularized_velocity(h: f64, hu: f64, eps: f64) -> f64 {
    if h < DRY_DEPTH {
        return 0.0;
    }
    let h4 = h * h * h * h;
    std::f64::consts::SQRT_2 * h * hu / (h4 + h4.max(eps)).sqrt()
}

/// Physical flux with the desingularized velocity; momentum is recomputed as `h u`.
pub fn sw_flux(h: f64, hu: f64, g: f64, eps: f64) -> Result<[f64; 2]> {
    if h < 0.0 {
        return Err(Error::NegativeDepth { cell: -1, depth: h });
    }
    Ok(flux_unchecked(h, hu, g, eps))
}

fn flux_unchecked(h: f64, hu: f64, g: f64, eps: f64) -> [f64; 2] {
    let u = desingularized_velocity(h, hu, eps);
    let q = h * u;
    [q, q * u + 0.5 * g * h * h]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShallowWaterModel {
    g: f64,
    eps: f64,
    topography: Topography,
    /// Bottom measured from its value at the leftmost ghost interface.
    relative: Topography,
}

impl ShallowWaterModel {
    /// Desingularization defaults to `dx^4`.
    pub fn new(grid: &Grid1D, g: f64, topography: Topography) -> Self {
        let reference = topography.at_interface(-(N_GHOST as isize));
        Self {
            g,
            eps: grid.dx().powi(4),
            relative: topography.shifted(-reference),
            topography,
        }
    }

    pub fn gravity(&self) -> f64 {
        self.g
    }

    pub fn desingularization(&self) -> f64 {
        self.eps
    }

    pub fn topography(&self) -> &Topography {
        &self.topography
    }

    /// Builds `(h, hu)` from a surface and discharge per cell; fails where `w < Z`.
    pub fn state_from_surface(
        &self,
        grid: &Grid1D,
        mut surface_discharge: impl FnMut(usize) -> (f64, f64),
    ) -> Result<StateField> {
        let mut field = StateField::zeros(*grid, 2);
        for j in 0..grid.n_cells() {
            let (w, q) = surface_discharge(j);
            let z = self.topography.at_cell(j as isize);
            if w < z {
                return Err(Error::SurfaceBelowBottom {
                    cell: j as isize,
                    surface: w,
                    bottom: z,
                });
            }
            field.cell_mut(j as isize).copy_from_slice(&[w - z, q]);
        }
        Ok(field)
    }

    /// Surface reconstruction with the positivity correction, followed by the
    /// desingularized interface momenta. Slopes are stored for `(w, hu)`.
    pub fn reconstruct_equilibrium(&self, field: &StateField, theta: f64) -> Result<Reconstruction> {
        let grid = field.grid();
        let n = grid.n_cells() as isize;
        let dx = grid.dx();
        let topo = &self.relative;
        let surface = |j: isize| field.get(j, 0) + topo.at_cell(j);
        let mut rec = Reconstruction::new(n as usize, 2);
        for j in -1..=n {
            let h = field.get(j, 0);
            if !h.is_finite() || !field.get(j, 1).is_finite() {
                return Err(Error::NonFinite {
                    what: "reconstruction input",
                    cell: j,
                    component: if h.is_finite() { 1 } else { 0 },
                });
            }
            if h < 0.0 {
                return Err(Error::SurfaceBelowBottom {
                    cell: j,
                    surface: h + self.topography.at_cell(j),
                    bottom: self.topography.at_cell(j),
                });
            }
            let (z_w, z_e) = (topo.at_interface(j), topo.at_interface(j + 1));
            let w = surface(j);
            let inc = limited_increment(surface(j - 1), w, surface(j + 1), theta);
            let (mut w_west, mut w_east) = (w - 0.5 * inc, w + 0.5 * inc);
            if w_east < z_e {
                w_east = z_e;
                w_west = 2.0 * w - z_e;
            } else if w_west < z_w {
                w_west = z_w;
                w_east = 2.0 * w - z_w;
            }
            rec.set_slope(j, 0, (w_east - w_west) / dx);

            let (ql, qc, qr) = (field.get(j - 1, 1), field.get(j, 1), field.get(j + 1, 1));
            let q_inc = limited_increment(ql, qc, qr, theta);
            rec.set_slope(j, 1, q_inc / dx);

            let h_east = (w_east - z_e).max(0.0);
            let h_west = (w_west - z_w).max(0.0);
            if j < n {
                let u = desingularized_velocity(h_east, qc + 0.5 * q_inc, self.eps);
                rec.minus_mut((j + 1) as usize).copy_from_slice(&[h_east, h_east * u]);
            }
            if j >= 0 {
                let u = desingularized_velocity(h_west, qc - 0.5 * q_inc, self.eps);
                rec.plus_mut(j as usize).copy_from_slice(&[h_west, h_west * u]);
            }
        }
        Ok(rec)
    }

    /// Per-cell `(0, -g h_j (Z_{j+1/2} - Z_{j-1/2}) / dx)` on the interior.
    pub fn source(&self, field: &StateField) -> Vec<[f64; 2]> {
        let dx = field.grid().dx();
        (0..field.grid().n_cells() as isize)
            .map(|j| {
                let dz = self.relative.at_interface(j + 1) - self.relative.at_interface(j);
                [0.0, -self.g * field.get(j, 0) * dz / dx]
            })
            .collect()
    }
}

impl Model for ShallowWaterModel {
    fn components(&self) -> usize {
        2
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["h", "hu"]
    }

    fn flux(&self, state: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&flux_unchecked(state[0].max(0.0), state[1], self.g, self.eps));
    }

    fn local_speeds(&self, minus: &[f64], plus: &[f64]) -> LocalSpeeds {
        let (hl, hr) = (minus[0].max(0.0), plus[0].max(0.0));
        let ul = desingularized_velocity(hl, minus[1], self.eps);
        let ur = desingularized_velocity(hr, plus[1], self.eps);
        let (cl, cr) = ((self.g * hl).sqrt(), (self.g * hr).sqrt());
        LocalSpeeds {
            a_minus: (ul - cl).min(ur - cr).min(0.0),
            a_plus: (ul + cl).max(ur + cr).max(0.0),
        }
    }

    fn reconstruct(&self, field: &StateField, theta: f64) -> Result<Reconstruction> {
        self.reconstruct_equilibrium(field, theta)
    }

    /// Free boundaries extrapolate the surface `w` and the discharge.
    fn apply_boundary(&self, boundary: Boundary, field: &mut StateField) {
        boundary.apply(field);
        if boundary != Boundary::Free {
            return;
        }
        let n = field.grid().n_cells() as isize;
        let g = N_GHOST as isize;
        let ghosts = (1..=g).map(|k| (-k, 0)).chain((0..g).map(|k| (n + k, n - 1)));
        for (ghost, inner) in ghosts {
            let w = field.get(inner, 0) + self.relative.at_cell(inner);
            field.cell_mut(ghost)[0] = (w - self.relative.at_cell(ghost)).max(0.0);
        }
    }

    fn add_source(&self, field: &StateField, _rec: &Reconstruction, rhs: &mut [f64]) {
        for (j, s) in self.source(field).into_iter().enumerate() {
            rhs[2 * j + 1] += s[1];
        }
    }

    fn check_state(&self, field: &StateField) -> Result<()> {
        for j in 0..field.grid().n_cells() as isize {
            let h = field.get(j, 0);
            if h < 0.0 {
                return Err(Error::NegativeDepth { cell: j, depth: h });
            }
        }
        Ok(())
    }

    fn observables(&self, field: &StateField) -> Vec<Observable> {
        let n = field.grid().n_cells() as isize;
        vec![
            Observable {
                name: "w",
                values: (0..n)
                    .map(|j| field.get(j, 0) + self.topography.at_cell(j))
                    .collect(),
            },
            Observable {
                name: "hu",
                values: field.component(1),
            },
        ]
    }
}
