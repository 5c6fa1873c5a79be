//! Semi-discrete second-order central-upwind finite-volume scheme.
//!
//! Piecewise-linear reconstruction with the generalized minmod limiter, one-sided local
//! speeds at every interface, SSP-RK3 time stepping under a CFL restriction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::StateField;

/// Below this `a+ - a-` the interface flux falls back to the arithmetic mean.
const DEGENERATE_SPEED_GAP: f64 = 1e-14;

/// Largest number of conserved components a model may have.
pub const MAX_COMPONENTS: usize = 4;

/// Steps shorter than this fraction of `dx` abort the run.
const MIN_STEP_OVER_DX: f64 = 1e-12;

/// Three-argument minmod.
pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Limited increment `slope * dx` of the middle cell of a three-cell stencil.
#[inline]
pub fn limited_increment(left: f64, mid: f64, right: f64, theta: f64) -> f64 {
    minmod3(
        theta * (mid - left),
        0.5 * (right - left),
        theta * (right - mid),
    )
}

/// Interface values and limited slopes.
///
/// Interface `i` (for `i = 0..=n`) sits between cells `i - 1` and `i`; `minus[i]` is
/// the value reconstructed from the left cell, `plus[i]` from the right cell. Slopes
/// are stored for cells `-1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    m: usize,
    minus: Vec<f64>,
    plus: Vec<f64>,
    slopes: Vec<f64>,
}

impl Reconstruction {
    pub fn new(n_cells: usize, m: usize) -> Self {
        Self {
            m,
            minus: vec![0.0; (n_cells + 1) * m],
            plus: vec![0.0; (n_cells + 1) * m],
            slopes: vec![0.0; (n_cells + 2) * m],
        }
    }

    pub fn interfaces(&self) -> usize {
        self.minus.len() / self.m
    }

    pub fn minus(&self, i: usize) -> &[f64] {
        &self.minus[i * self.m..(i + 1) * self.m]
    }

    pub fn plus(&self, i: usize) -> &[f64] {
        &self.plus[i * self.m..(i + 1) * self.m]
    }

    pub fn minus_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.minus[i * self.m..(i + 1) * self.m]
    }

    pub fn plus_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.plus[i * self.m..(i + 1) * self.m]
    }

    /// Slope of component `k` in cell `j` (`-1 <= j <= n`).
    pub fn slope(&self, j: isize, k: usize) -> f64 {
        self.slopes[(j + 1) as usize * self.m + k]
    }

    pub fn set_slope(&mut self, j: isize, k: usize, value: f64) {
        self.slopes[(j + 1) as usize * self.m + k] = value;
    }
}

/// Component-wise minmod reconstruction of the conserved variables.
/// Ghost cells must already be filled.
pub fn reconstruct(field: &StateField, theta: f64) -> Result<Reconstruction> {
    let grid = field.grid();
    let n = grid.n_cells() as isize;
    let m = field.components();
    let dx = grid.dx();
    let mut rec = Reconstruction::new(n as usize, m);
    for j in -1..=n {
        let (l, c, r) = (field.cell(j - 1), field.cell(j), field.cell(j + 1));
        for k in 0..m {
            if !c[k].is_finite() {
                return Err(Error::NonFinite {
                    what: "reconstruction input",
                    cell: j,
                    component: k,
                });
            }
            let inc = limited_increment(l[k], c[k], r[k], theta);
            rec.set_slope(j, k, inc / dx);
            if j < n {
                rec.minus_mut((j + 1) as usize)[k] = c[k] + 0.5 * inc;
            }
            if j >= 0 {
                rec.plus_mut(j as usize)[k] = c[k] - 0.5 * inc;
            }
        }
    }
    Ok(rec)
}

/// One-sided local speeds at an interface, `a_minus <= 0 <= a_plus`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalSpeeds {
    pub a_minus: f64,
    pub a_plus: f64,
}

impl LocalSpeeds {
    pub fn max_abs(&self) -> f64 {
        self.a_plus.max(-self.a_minus)
    }
}

/// Named per-cell output of a realization.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub name: &'static str,
    pub values: Vec<f64>,
}

/// A hyperbolic balance law `U_t + F(U)_x = S(U)` discretized on one grid.
pub trait Model: Send + Sync {
    fn components(&self) -> usize;

    fn component_names(&self) -> &'static [&'static str];

    fn flux(&self, state: &[f64], out: &mut [f64]);

    fn local_speeds(&self, minus: &[f64], plus: &[f64]) -> LocalSpeeds;

    fn reconstruct(&self, field: &StateField, theta: f64) -> Result<Reconstruction> {
        reconstruct(field, theta)
    }

    /// Fills the ghost cells before a stage.
    fn apply_boundary(&self, boundary: Boundary, field: &mut StateField) {
        boundary.apply(field);
    }

    /// Adds the cell source to `rhs` (interior cells, cell-major).
    fn add_source(&self, _field: &StateField, _rec: &Reconstruction, _rhs: &mut [f64]) {}

    /// Model-specific admissibility of an accepted state.
    fn check_state(&self, _field: &StateField) -> Result<()> {
        Ok(())
    }

    /// Quantities reported downstream. Defaults to the conserved components.
    fn observables(&self, field: &StateField) -> Vec<Observable> {
        self.component_names()
            .iter()
            .enumerate()
            .map(|(k, &name)| Observable {
                name,
                values: field.component(k),
            })
            .collect()
    }
}

/// Central-upwind numerical flux at one interface.
pub fn central_upwind_flux(
    model: &dyn Model,
    minus: &[f64],
    plus: &[f64],
    out: &mut [f64],
) -> Result<LocalSpeeds> {
    let m = model.components();
    if let Some(k) = minus.iter().chain(plus).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "interface state",
            cell: -1,
            component: k % m,
        });
    }
    if m > MAX_COMPONENTS {
        return Err(Error::Config(format!(
            "models may have at most {MAX_COMPONENTS} components, got {m}"
        )));
    }
    let mut f_minus = [0.0; MAX_COMPONENTS];
    let mut f_plus = [0.0; MAX_COMPONENTS];
    model.flux(minus, &mut f_minus[..m]);
    model.flux(plus, &mut f_plus[..m]);
    let speeds = model.local_speeds(minus, plus);
    let (ap, am) = (speeds.a_plus, speeds.a_minus);
    let gap = ap - am;
    if gap < DEGENERATE_SPEED_GAP {
        for k in 0..m {
            out[k] = 0.5 * (f_minus[k] + f_plus[k]);
        }
    } else {
        for k in 0..m {
            out[k] = (ap * f_minus[k] - am * f_plus[k]) / gap
                + ap * am / gap * (plus[k] - minus[k]);
        }
    }
    Ok(speeds)
}

/// Semi-discrete right-hand side on the interior and the largest local speed.
/// Ghost cells must already be filled.
pub fn spatial_operator(model: &dyn Model, field: &StateField, theta: f64) -> Result<(Vec<f64>, f64)> {
    let grid = field.grid();
    let n = grid.n_cells();
    let m = field.components();
    let rec = model.reconstruct(field, theta)?;
    let mut fluxes = vec![0.0; (n + 1) * m];
    let mut a_max = 0.0f64;
    for i in 0..=n {
        let speeds = central_upwind_flux(
            model,
            rec.minus(i),
            rec.plus(i),
            &mut fluxes[i * m..(i + 1) * m],
        )?;
        a_max = a_max.max(speeds.max_abs());
    }
    let inv_dx = 1.0 / grid.dx();
    let mut rhs = vec![0.0; n * m];
    for j in 0..n {
        for k in 0..m {
            rhs[j * m + k] = -(fluxes[(j + 1) * m + k] - fluxes[j * m + k]) * inv_dx;
        }
    }
    model.add_source(field, &rec, &mut rhs);
    Ok((rhs, a_max))
}

/// Largest one-sided speed over all interfaces of the reconstructed field.
pub fn max_wave_speed(model: &dyn Model, field: &StateField, theta: f64) -> Result<f64> {
    let rec = model.reconstruct(field, theta)?;
    Ok((0..rec.interfaces())
        .map(|i| model.local_speeds(rec.minus(i), rec.plus(i)).max_abs())
        .fold(0.0, f64::max))
}

fn axpy_interior(base: &StateField, dt: f64, rhs: &[f64]) -> StateField {
    let mut out = base.clone();
    let m = base.components();
    for j in 0..base.grid().n_cells() {
        let cell = out.cell_mut(j as isize);
        for k in 0..m {
            cell[k] += dt * rhs[j * m + k];
        }
    }
    out
}

/// `out = alpha * a + beta * b` on the interior.
fn blend(alpha: f64, a: &StateField, beta: f64, b: &StateField) -> StateField {
    let mut out = a.clone();
    for j in 0..a.grid().n_cells() as isize {
        let (ca, cb) = (a.cell(j), b.cell(j));
        for (k, v) in out.cell_mut(j).iter_mut().enumerate() {
            *v = alpha * ca[k] + beta * cb[k];
        }
    }
    out
}

/// Three-stage third-order SSP Runge–Kutta step. `rhs` receives each stage (and may
/// fill its ghost cells) and returns the interior right-hand side.
pub fn ssp_rk3_step<F>(field: &StateField, dt: f64, mut rhs: F) -> Result<StateField>
where
    F: FnMut(&mut StateField) -> Result<Vec<f64>>,
{
    let mut u0 = field.clone();
    let l0 = rhs(&mut u0)?;
    ssp_rk3_from_first_stage(&u0, dt, &l0, rhs)
}

fn ssp_rk3_from_first_stage<F>(u0: &StateField, dt: f64, l0: &[f64], mut rhs: F) -> Result<StateField>
where
    F: FnMut(&mut StateField) -> Result<Vec<f64>>,
{
    let mut u1 = axpy_interior(u0, dt, l0);
    let l1 = rhs(&mut u1)?;
    let mut u2 = blend(0.75, u0, 0.25, &axpy_interior(&u1, dt, &l1));
    let l2 = rhs(&mut u2)?;
    Ok(blend(1.0 / 3.0, u0, 2.0 / 3.0, &axpy_interior(&u2, dt, &l2)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Zero-order extrapolation into the ghost cells.
    #[default]
    Free,
    Periodic,
}

impl Boundary {
    pub fn apply(self, field: &mut StateField) {
        match self {
            Boundary::Free => field.fill_ghosts_outflow(),
            Boundary::Periodic => field.fill_ghosts_periodic(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub final_time: f64,
    #[serde(default = "SolverSettings::default_cfl")]
    pub cfl: f64,
    #[serde(default = "SolverSettings::default_theta")]
    pub minmod_theta: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

impl SolverSettings {
    pub const DEFAULT_CFL: f64 = 0.45;
    pub const DEFAULT_THETA: f64 = 1.3;

    fn default_cfl() -> f64 {
        Self::DEFAULT_CFL
    }

    fn default_theta() -> f64 {
        Self::DEFAULT_THETA
    }

    pub fn new(final_time: f64) -> Self {
        Self {
            final_time,
            cfl: Self::DEFAULT_CFL,
            minmod_theta: Self::DEFAULT_THETA,
            boundary: Boundary::Free,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            return Err(Error::Config(format!(
                "final_time must be positive, got {}",
                self.final_time
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(1.0..=2.0).contains(&self.minmod_theta) {
            return Err(Error::Config(format!(
                "minmod_theta must lie in [1, 2], got {}",
                self.minmod_theta
            )));
        }
        Ok(())
    }
}

/// Per-step report handed to observers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub max_speed: f64,
}

/// Advances `initial` to `settings.final_time`.
pub fn solve(settings: &SolverSettings, model: &dyn Model, initial: StateField) -> Result<StateField> {
    solve_observed(settings, model, initial, |_, _| {})
}

/// As [`solve`], calling `observer` after every accepted step.
pub fn solve_observed<O>(
    settings: &SolverSettings,
    model: &dyn Model,
    initial: StateField,
    mut observer: O,
) -> Result<StateField>
where
    O: FnMut(&StepInfo, &StateField),
{
    settings.validate()?;
    if initial.components() != model.components() {
        return Err(Error::Config(format!(
            "state has {} components, model expects {}",
            initial.components(),
            model.components()
        )));
    }
    let dx = initial.grid().dx();
    let theta = settings.minmod_theta;
    let boundary = settings.boundary;
    let mut rhs = |u: &mut StateField| -> Result<Vec<f64>> {
        model.apply_boundary(boundary, u);
        spatial_operator(model, u, theta).map(|(r, _)| r)
    };

    let mut u = initial;
    model.check_state(&u)?;
    let mut time = 0.0;
    let mut step = 0;
    while time < settings.final_time {
        model.apply_boundary(boundary, &mut u);
        let (l0, a_max) = spatial_operator(model, &u, theta)?;
        let remaining = settings.final_time - time;
        let dt_cfl = if a_max > 0.0 {
            settings.cfl * dx / a_max
        } else {
            f64::INFINITY
        };
        if dt_cfl < MIN_STEP_OVER_DX * dx {
            return Err(Error::StepUnderflow { dt: dt_cfl, time });
        }
        let last = dt_cfl >= remaining;
        let dt = if last { remaining } else { dt_cfl };
        u = ssp_rk3_from_first_stage(&u, dt, &l0, &mut rhs)?;
        time = if last { settings.final_time } else { time + dt };
        step += 1;
        if let Some((cell, component)) = u.find_non_finite() {
            return Err(Error::NonFinite {
                what: "state after step",
                cell,
                component,
            });
        }
        model.check_state(&u)?;
        observer(
            &StepInfo {
                step,
                time,
                dt,
                max_speed: a_max,
            },
            &u,
        );
    }
    model.apply_boundary(boundary, &mut u);
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Grid1D;

    /// Linear advection `u_t + c u_x = 0`, enough to exercise the generic machinery.
    struct Advection(f64);

    impl Model for Advection {
        fn components(&self) -> usize {
            1
        }
        fn component_names(&self) -> &'static [&'static str] {
            &["u"]
        }
        fn flux(&self, s: &[f64], out: &mut [f64]) {
            out[0] = self.0 * s[0];
        }
        fn local_speeds(&self, _: &[f64], _: &[f64]) -> LocalSpeeds {
            LocalSpeeds {
                a_minus: self.0.min(0.0),
                a_plus: self.0.max(0.0),
            }
        }
    }

    #[test]
    fn minmod_cases() {
        assert_eq!(minmod3(1.3, 1.5, 2.6), 1.3);
        assert_eq!(minmod3(1.0, 0.0, -1.0), 0.0);
        assert_eq!(minmod3(-2.0, -3.0, -1.0), -1.0);
        assert_eq!(minmod3(1.0, 2.0, -0.5), 0.0);
    }

    #[test]
    fn constant_field_reconstruction() {
        let g = Grid1D::new(0.0, 1.0, 8).unwrap();
        let mut f = StateField::from_fn(g, 2, |_| vec![3.0, -1.0]);
        f.fill_ghosts_outflow();
        let r = reconstruct(&f, 1.3).unwrap();
        for i in 0..=8 {
            assert_eq!(r.minus(i), &[3.0, -1.0]);
            assert_eq!(r.plus(i), &[3.0, -1.0]);
        }
        for j in -1..=8 {
            assert_eq!(r.slope(j, 0), 0.0);
        }
    }

    #[test]
    fn linear_field_reconstruction() {
        let g = Grid1D::new(0.0, 1.0, 10).unwrap();
        let mut f = StateField::zeros(g, 1);
        for j in -2..12 {
            f.cell_mut(j)[0] = g.center(j);
        }
        for theta in [1.0, 1.3, 2.0] {
            let r = reconstruct(&f, theta).unwrap();
            for j in -1..=10 {
                assert!((r.slope(j, 0) - 1.0).abs() < 1e-12);
            }
            for i in 0..=10 {
                let x = g.interface(i as isize);
                assert!((r.minus(i)[0] - x).abs() < 1e-14);
                assert!((r.plus(i)[0] - x).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jump_reconstruction_is_bounded() {
        let g = Grid1D::new(0.0, 1.0, 8).unwrap();
        let mut f = StateField::from_fn(g, 1, |j| vec![if j < 4 { 1.0 } else { 2.0 }]);
        f.fill_ghosts_outflow();
        let r = reconstruct(&f, 2.0).unwrap();
        for i in 0..=8 {
            for v in [r.minus(i)[0], r.plus(i)[0]] {
                assert!((1.0..=2.0).contains(&v));
            }
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let g = Grid1D::new(0.0, 1.0, 8).unwrap();
        let mut f = StateField::from_fn(g, 1, |j| vec![if j == 3 { f64::NAN } else { 1.0 }]);
        f.fill_ghosts_outflow();
        assert!(reconstruct(&f, 1.3).is_err());
    }

    #[test]
    fn rk3_zero_and_constant_rhs() {
        let g = Grid1D::new(0.0, 1.0, 6).unwrap();
        let f = StateField::from_fn(g, 1, |j| vec![j as f64 * 0.5]);
        let same = ssp_rk3_step(&f, 0.1, |_| Ok(vec![0.0; 6])).unwrap();
        assert_eq!(same.interior(), f.interior());
        let shifted = ssp_rk3_step(&f, 0.25, |_| Ok(vec![2.0; 6])).unwrap();
        for j in 0..6 {
            assert!((shifted.get(j, 0) - (f.get(j, 0) + 0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn rk3_local_error_is_fourth_order() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let lambda = -1.7;
        let err = |dt: f64| {
            let f = StateField::from_fn(g, 1, |_| vec![1.0]);
            let u = ssp_rk3_step(&f, dt, |s| Ok(s.interior().iter().map(|v| lambda * v).collect()))
                .unwrap();
            (u.get(0, 0) - (lambda * dt).exp()).abs()
        };
        let (e1, e2) = (err(0.1), err(0.05));
        let ratio = e1 / e2;
        // Taylor: local error (lambda dt)^4 / 24, ratio 16 as dt halves
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
        assert!((e1 - (lambda * 0.1f64).powi(4) / 24.0).abs() < 0.1 * e1);
    }

    #[test]
    fn degenerate_speeds_use_mean_flux() {
        let model = Advection(0.0);
        let mut out = [0.0];
        central_upwind_flux(&model, &[1.0], &[3.0], &mut out).unwrap();
        assert_eq!(out[0], 0.0);
    }

    #[test]
    fn upwind_advection_flux() {
        let model = Advection(2.0);
        let mut out = [0.0];
        central_upwind_flux(&model, &[1.0], &[3.0], &mut out).unwrap();
        assert_eq!(out[0], 2.0);
    }

    #[test]
    fn settings_validation() {
        assert!(SolverSettings::new(1.0).validate().is_ok());
        assert!(SolverSettings::new(0.0).validate().is_err());
        let mut s = SolverSettings::new(1.0);
        s.cfl = 1.0;
        assert!(s.validate().is_err());
        s.cfl = 0.45;
        s.minmod_theta = 2.5;
        assert!(s.validate().is_err());
    }

    #[test]
    fn periodic_advection_conserves_mass() {
        let g = Grid1D::new(0.0, 1.0, 64).unwrap();
        let init = StateField::from_fn(g, 1, |j| {
            vec![if (16..32).contains(&j) { 2.0 } else { 0.5 }]
        });
        let mut settings = SolverSettings::new(0.3);
        settings.boundary = Boundary::Periodic;
        let mass0 = init.total(0);
        let mut prev = mass0;
        let u = solve_observed(&settings, &Advection(1.0), init, |_, f| {
            let m = f.total(0);
            assert!((m - prev).abs() < 1e-12);
            prev = m;
        })
        .unwrap();
        assert!((u.total(0) - mass0).abs() < 1e-12);
    }

    #[test]
    fn final_step_lands_on_time() {
        let g = Grid1D::new(0.0, 1.0, 32).unwrap();
        let init = StateField::from_fn(g, 1, |_| vec![1.0]);
        let settings = SolverSettings::new(0.123);
        let mut last = None;
        let mut cfl_ok = true;
        solve_observed(&settings, &Advection(1.0), init, |info, _| {
            cfl_ok &= info.dt * info.max_speed / g.dx() <= 0.45 + 1e-12;
            last = Some(info.time);
        })
        .unwrap();
        assert!(cfl_ok);
        assert_eq!(last, Some(0.123));
    }
}
