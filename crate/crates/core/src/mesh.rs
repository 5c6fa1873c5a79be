//! Uniform cell-centred meshes and per-cell state storage.

use crate::error::{Error, Result};

/// Ghost layers on each side of the interior.
pub const N_GHOST: usize = 2;

/// Uniform cell-centred mesh on `[x_min, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    dx: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Grid(format!(
                "bounds must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if x_min >= x_max {
            return Err(Error::Grid(format!("x_min {x_min} must be < x_max {x_max}")));
        }
        if n_cells < 4 {
            return Err(Error::Grid(format!("need at least 4 cells, got {n_cells}")));
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_ghost(&self) -> usize {
        N_GHOST
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Centre of cell `j`; negative and `>= n_cells` indices address ghosts.
    pub fn center(&self, j: isize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.dx
    }

    /// Position of interface `i`, the left face of cell `i`.
    pub fn interface(&self, i: isize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells as isize).map(|j| self.center(j)).collect()
    }

    /// Interior cell whose centre is nearest to `x` (ties go right).
    pub fn nearest_cell(&self, x: f64) -> Result<usize> {
        if !(self.x_min..=self.x_max).contains(&x) {
            return Err(Error::OutOfRange(format!(
                "probe x = {x} outside [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        let j = ((x - self.x_min) / self.dx - 0.5).round();
        Ok((j.max(0.0) as usize).min(self.n_cells - 1))
    }
}

/// Cell data for one realization: `m` components per cell, interior plus ghosts,
/// stored cell-major.
#[derive(Clone, Debug, PartialEq)]
pub struct StateField {
    grid: Grid1D,
    m: usize,
    data: Vec<f64>,
}

impl StateField {
    pub fn zeros(grid: Grid1D, m: usize) -> Self {
        assert!(m > 0, "state needs at least one component");
        Self {
            grid,
            m,
            data: vec![0.0; (grid.n_cells() + 2 * N_GHOST) * m],
        }
    }

    /// Builds a field from interior cell values produced by `f(j) -> [u_0..u_{m-1}]`.
    pub fn from_fn(grid: Grid1D, m: usize, mut f: impl FnMut(usize) -> Vec<f64>) -> Self {
        let mut field = Self::zeros(grid, m);
        for j in 0..grid.n_cells() {
            let v = f(j);
            assert_eq!(v.len(), m, "initializer returned wrong component count");
            field.cell_mut(j as isize).copy_from_slice(&v);
        }
        field
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.m
    }

    /// All values including ghosts.
    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn offset(&self, j: isize) -> usize {
        let k = j + N_GHOST as isize;
        debug_assert!(k >= 0 && (k as usize) < self.grid.n_cells() + 2 * N_GHOST);
        k as usize * self.m
    }

    pub fn cell(&self, j: isize) -> &[f64] {
        let o = self.offset(j);
        &self.data[o..o + self.m]
    }

    pub fn cell_mut(&mut self, j: isize) -> &mut [f64] {
        let o = self.offset(j);
        &mut self.data[o..o + self.m]
    }

    pub fn get(&self, j: isize, k: usize) -> f64 {
        self.data[self.offset(j) + k]
    }

    /// Interior values of component `k`.
    pub fn component(&self, k: usize) -> Vec<f64> {
        (0..self.grid.n_cells() as isize)
            .map(|j| self.get(j, k))
            .collect()
    }

    pub fn interior(&self) -> &[f64] {
        let o = N_GHOST * self.m;
        &self.data[o..o + self.grid.n_cells() * self.m]
    }

    /// Zero-order extrapolation: each ghost copies its nearest interior cell.
    pub fn fill_ghosts_outflow(&mut self) {
        let n = self.grid.n_cells() as isize;
        for g in 1..=N_GHOST as isize {
            let first = self.cell(0).to_vec();
            self.cell_mut(-g).copy_from_slice(&first);
            let last = self.cell(n - 1).to_vec();
            self.cell_mut(n - 1 + g).copy_from_slice(&last);
        }
    }

    pub fn fill_ghosts_periodic(&mut self) {
        let n = self.grid.n_cells() as isize;
        for g in 1..=N_GHOST as isize {
            let wrap_left = self.cell(n - g).to_vec();
            self.cell_mut(-g).copy_from_slice(&wrap_left);
            let wrap_right = self.cell(g - 1).to_vec();
            self.cell_mut(n - 1 + g).copy_from_slice(&wrap_right);
        }
    }

    /// First non-finite interior entry, if any.
    pub fn find_non_finite(&self) -> Option<(isize, usize)> {
        let n = self.grid.n_cells() as isize;
        (0..n).find_map(|j| {
            self.cell(j)
                .iter()
                .position(|v| !v.is_finite())
                .map(|k| (j, k))
        })
    }

    /// `sum_j u_j dx` for component `k`.
    pub fn total(&self, k: usize) -> f64 {
        self.component(k).iter().sum::<f64>() * self.grid.dx()
    }
}
