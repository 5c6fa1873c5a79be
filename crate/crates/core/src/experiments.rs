//! Experiment presets, the exact Burgers Riemann oracle, and the study runner that
//! turns an ensemble into surface, slice and moments artifacts.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{GridConfig, RunConfig};
use crate::csv::{artifact_name, moments_table, slice_table, snapshot_table, surface_table, Table};
use crate::error::{Error, Result};
use crate::fv::{solve, SolverSettings};
use crate::gpc::Moments;
use crate::mesh::Grid1D;
use crate::models::{BottomSpec, ModelSpec, Realization, DEFAULT_GRAVITY};
use crate::quadrature::{gauss_legendre, integrate};
use crate::splines::ShapeGoal;
use crate::uq::{
    collocation_nodes, moments_from_gpc, moments_from_spline, run_ensemble, surface, xi_grid,
    CollocationEnsemble, Method, MomentField, NodeRule,
};

/// Orientation of the Example 1 Riemann data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `u = 2` left of the jump and `u = 1` right of it: a shock.
    #[default]
    Shock,
    /// `u = 1` left and `u = 2` right: a rarefaction.
    AsPrinted,
}

impl Orientation {
    pub fn states(self) -> (f64, f64) {
        match self {
            Orientation::Shock => (2.0, 1.0),
            Orientation::AsPrinted => (1.0, 2.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Shock => "shock",
            Orientation::AsPrinted => "as_printed",
        }
    }
}

/// Exact entropy solution of Burgers with Riemann data jumping at `jump_at + jump_slope * xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BurgersRiemannOracle {
    pub u_left: f64,
    pub u_right: f64,
    pub jump_at: f64,
    pub jump_slope: f64,
}

impl BurgersRiemannOracle {
    pub fn example1(orientation: Orientation) -> Self {
        let (u_left, u_right) = orientation.states();
        Self {
            u_left,
            u_right,
            jump_at: 0.0,
            jump_slope: 0.1,
        }
    }

    pub fn shock_speed(&self) -> f64 {
        0.5 * (self.u_left + self.u_right)
    }

    pub fn eval(&self, x: f64, t: f64, xi: f64) -> f64 {
        let x0 = self.jump_at + self.jump_slope * xi;
        let (l, r) = (self.u_left, self.u_right);
        if t <= 0.0 || l >= r {
            let front = if t <= 0.0 { x0 } else { x0 + self.shock_speed() * t };
            return if x < front { l } else { r };
        }
        ((x - x0) / t).clamp(l, r)
    }

    /// `xi` values where the solution at `(x, t)` has a kink or jump.
    fn breakpoints(&self, x: f64, t: f64) -> Vec<f64> {
        if self.jump_slope == 0.0 {
            return Vec::new();
        }
        let speeds = if t <= 0.0 {
            vec![0.0]
        } else if self.u_left >= self.u_right {
            vec![self.shock_speed()]
        } else {
            vec![self.u_left, self.u_right]
        };
        speeds
            .into_iter()
            .map(|s| (x - s * t - self.jump_at) / self.jump_slope)
            .filter(|b| b.abs() < 1.0)
            .collect()
    }

    /// Mean and variance at `(x, t)` under the uniform density on `[-1, 1]`.
    pub fn moments(&self, x: f64, t: f64) -> Moments {
        let rule = gauss_legendre(10).expect("10 points is a valid rule");
        let mut cuts = vec![-1.0, 1.0];
        cuts.extend(self.breakpoints(x, t));
        cuts.sort_by(f64::total_cmp);
        let (mut mean, mut second) = (0.0, 0.0);
        for w in cuts.windows(2) {
            mean += 0.5 * integrate(&rule, w[0], w[1], |xi| self.eval(x, t, xi));
            second += 0.5 * integrate(&rule, w[0], w[1], |xi| self.eval(x, t, xi).powi(2));
        }
        Moments::from_mean_variance(mean, second - mean * mean)
    }
}

/// Exact Example 1 solution.
pub fn burgers_exact(x: f64, t: f64, xi: f64, orientation: Orientation) -> f64 {
    BurgersRiemannOracle::example1(orientation).eval(x, t, xi)
}

/// Every input of one uncertainty study.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyPlan {
    pub id: String,
    pub model: ModelSpec,
    pub grid: GridConfig,
    pub solver: SolverSettings,
    pub points: usize,
    pub methods: Vec<Method>,
    pub probe_x: Option<f64>,
    pub surface_points: usize,
    pub quadrature_points: usize,
    pub surfaces: bool,
}

impl StudyPlan {
    /// A single-method plan from a run configuration.
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            id: config.output.prefix.clone(),
            model: config.model.clone(),
            grid: config.grid,
            solver: config.solver,
            points: config.uq.points,
            methods: vec![config.uq.method()],
            probe_x: config.uq.probe_x,
            surface_points: config.uq.surface_points,
            quadrature_points: config.uq.quadrature_points,
            surfaces: config.output.surface,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.solver.validate()?;
        if self.methods.is_empty() {
            return Err(Error::Config("a study needs at least one method".into()));
        }
        if self.surface_points < 2 || self.quadrature_points == 0 {
            return Err(Error::Config("surface_points >= 2 and quadrature_points >= 1 required".into()));
        }
        Ok(())
    }
}

pub const EXAMPLE1_CELLS: usize = 1600;
pub const EXAMPLE1_FINAL_TIME: f64 = 0.5;
pub const EXAMPLE1_POINTS: usize = 16;
pub const EXAMPLE1_PROBE: f64 = 0.734;
pub const EXAMPLE2_CELLS: usize = 800;
pub const EXAMPLE2_FINAL_TIME: f64 = 0.8;
pub const EXAMPLE2_POINTS: [usize; 2] = [16, 32];
pub const EXAMPLE2_PROBE: f64 = 0.694;
pub const SURFACE_POINTS: usize = 201;

/// The three pipelines every preset runs.
pub const PRESET_METHODS: [Method; 3] = [
    Method::Gpc,
    Method::Cubic,
    Method::SpSpline(ShapeGoal::Monotonicity),
];

fn unit_interval(n_cells: usize) -> GridConfig {
    GridConfig {
        x_min: -1.0,
        x_max: 1.0,
        n_cells,
    }
}

/// Burgers on `[-1, 1]` with `dx = 1/800`, `T = 0.5`, `L = 16`, probe at `x = 0.734`.
pub fn example1(orientation: Orientation) -> StudyPlan {
    let (u_left, u_right) = orientation.states();
    StudyPlan {
        id: "example1".into(),
        model: ModelSpec::BurgersRiemann {
            u_left,
            u_right,
            jump_at: 0.0,
            jump_slope: 0.1,
        },
        grid: unit_interval(EXAMPLE1_CELLS),
        solver: SolverSettings::new(EXAMPLE1_FINAL_TIME),
        points: EXAMPLE1_POINTS,
        methods: PRESET_METHODS.to_vec(),
        probe_x: Some(EXAMPLE1_PROBE),
        surface_points: SURFACE_POINTS,
        quadrature_points: 10,
        surfaces: true,
    }
}

/// Saint-Venant dam break over the `xi`-shifted bump, `dx = 1/400`, `T = 0.8`, `g = 1`.
pub fn example2(points: usize) -> Result<StudyPlan> {
    if !EXAMPLE2_POINTS.contains(&points) {
        return Err(Error::Config(format!("example2 runs with L = 16 or 32, got {points}")));
    }
    Ok(StudyPlan {
        id: "example2".into(),
        model: ModelSpec::ShallowWater {
            gravity: DEFAULT_GRAVITY,
            w_left: 1.0,
            w_right: 0.5,
            jump_at: 0.0,
            bottom: BottomSpec::Example2,
        },
        grid: unit_interval(EXAMPLE2_CELLS),
        solver: SolverSettings::new(EXAMPLE2_FINAL_TIME),
        points,
        methods: PRESET_METHODS.to_vec(),
        probe_x: Some(EXAMPLE2_PROBE),
        surface_points: SURFACE_POINTS,
        quadrature_points: 10,
        surfaces: true,
    })
}

/// Checks the preset constants and returns one line per check.
pub fn preset_selftest() -> Result<Vec<String>> {
    let mut lines = Vec::new();
    let mut check = |name: &str, ok: bool| -> Result<()> {
        lines.push(format!("{} {name}", if ok { "ok" } else { "FAILED" }));
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("preset self-test failed: {name}")))
        }
    };
    let e1 = example1(Orientation::Shock);
    let g1 = e1.grid.build()?;
    check("example1 dx = 1/800", g1.dx() == 1.0 / 800.0)?;
    check("example1 domain [-1, 1]", (g1.x_min(), g1.x_max()) == (-1.0, 1.0))?;
    check("example1 T = 0.5", e1.solver.final_time == 0.5)?;
    check("example1 L = 16", e1.points == 16)?;
    check("example1 probe x = 0.734", e1.probe_x == Some(0.734))?;
    check(
        "example1 shock orientation u = 2 | 1",
        matches!(e1.model, ModelSpec::BurgersRiemann { u_left, u_right, jump_slope, .. }
            if (u_left, u_right, jump_slope) == (2.0, 1.0, 0.1)),
    )?;
    check(
        "example1 cfl 0.45, theta 1.3",
        (e1.solver.cfl, e1.solver.minmod_theta) == (0.45, 1.3),
    )?;
    for l in EXAMPLE2_POINTS {
        let e2 = example2(l)?;
        let g2 = e2.grid.build()?;
        check(&format!("example2 (L = {l}) dx = 1/400"), g2.dx() == 1.0 / 400.0)?;
        check(&format!("example2 (L = {l}) T = 0.8"), e2.solver.final_time == 0.8)?;
        check(
            &format!("example2 (L = {l}) g = 1"),
            matches!(e2.model, ModelSpec::ShallowWater { gravity, .. } if gravity == 1.0),
        )?;
        check(&format!("example2 (L = {l}) probe x = 0.694"), e2.probe_x == Some(0.694))?;
    }
    check("example2 rejects L = 8", example2(8).is_err())?;
    check("surface grid has 201 points", SURFACE_POINTS == 201)?;
    Ok(lines)
}

/// Final state of the realization at `xi` as an `x,<component names>` table.
pub fn snapshot(config: &RunConfig, xi: f64) -> Result<Table> {
    config.validate()?;
    if !(-1.0..=1.0).contains(&xi) {
        return Err(Error::OutOfRange(format!("xi = {xi} outside [-1, 1]")));
    }
    let grid = config.build_grid()?;
    let Realization { model, initial } = config.model.realize(&grid, xi)?;
    let state = solve(&config.solver, model.as_ref(), initial).map_err(|e| Error::Realization {
        xi,
        source: Box::new(e),
    })?;
    let columns: Vec<Vec<f64>> = (0..state.components()).map(|k| state.component(k)).collect();
    snapshot_table(&grid.centers(), model.component_names(), &columns)
}

/// A probe location snapped to the nearest cell center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub requested: f64,
    pub cell: usize,
    pub center: f64,
}

impl Probe {
    pub fn snap(grid: &Grid1D, x: f64) -> Result<Self> {
        let cell = grid.nearest_cell(x)?;
        Ok(Self {
            requested: x,
            cell,
            center: grid.center(cell as isize),
        })
    }
}

/// Outputs of one method.
#[derive(Clone, Debug)]
pub struct MethodResult {
    pub method: Method,
    pub moments: MomentField,
    /// Probe slice on the `xi` grid, per observable.
    pub slices: Vec<Vec<f64>>,
    /// `surfaces[component][cell][i]`, when requested.
    pub surfaces: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Clone, Debug)]
pub struct Study {
    pub plan: StudyPlan,
    pub grid: Grid1D,
    pub probe: Option<Probe>,
    pub xi_grid: Vec<f64>,
    pub ensembles: Vec<(NodeRule, CollocationEnsemble)>,
    pub results: Vec<MethodResult>,
}

fn node_rule_for(method: Method) -> NodeRule {
    match method {
        Method::Gpc => NodeRule::Gauss,
        _ => NodeRule::Uniform,
    }
}

/// Runs the ensembles required by the plan's methods and post-processes each method.
pub fn run_study(plan: &StudyPlan) -> Result<Study> {
    plan.validate()?;
    let grid = plan.grid.build()?;
    let probe = plan.probe_x.map(|x| Probe::snap(&grid, x)).transpose()?;
    let xi = xi_grid(plan.surface_points);
    let mut ensembles: Vec<(NodeRule, CollocationEnsemble)> = Vec::new();
    for rule in [NodeRule::Gauss, NodeRule::Uniform] {
        if plan.methods.iter().any(|&m| node_rule_for(m) == rule) {
            let (nodes, weights) = collocation_nodes(rule, plan.points)?;
            let ensemble = run_ensemble(&plan.solver, &nodes, weights, |x| plan.model.realize(&grid, x))?;
            ensembles.push((rule, ensemble));
        }
    }
    let mut results = Vec::new();
    for &method in &plan.methods {
        let rule = node_rule_for(method);
        let ensemble = &ensembles
            .iter()
            .find(|(r, _)| *r == rule)
            .expect("ensemble built for every method")
            .1;
        let moments = match method {
            Method::Gpc => moments_from_gpc(ensemble)?,
            _ => moments_from_spline(ensemble, method, plan.quadrature_points)?,
        };
        let components = ensemble.observable_names().len();
        let slices = match probe {
            Some(p) => (0..components)
                .map(|k| {
                    let s = ensemble.slice(p.cell, k)?;
                    let interp = crate::uq::SliceInterpolant::build(
                        method,
                        &ensemble.nodes,
                        ensemble.weights.as_deref(),
                        &s.values,
                    )?;
                    xi.iter().map(|&x| interp.eval(x)).collect()
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let surfaces = if plan.surfaces {
            Some(
                (0..components)
                    .map(|k| surface(ensemble, method, k, &xi))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        results.push(MethodResult {
            method,
            moments,
            slices,
            surfaces,
        });
    }
    Ok(Study {
        plan: plan.clone(),
        grid,
        probe,
        xi_grid: xi,
        ensembles,
        results,
    })
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    example: &'a str,
    model: &'a ModelSpec,
    points: usize,
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    dx: f64,
    final_time: f64,
    cfl: f64,
    minmod_theta: f64,
    xi_grid_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<Probe>,
    gauss_nodes: Option<&'a [f64]>,
    uniform_nodes: Option<&'a [f64]>,
    files: Vec<String>,
}

impl Study {
    pub fn result(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }

    pub fn ensemble(&self, rule: NodeRule) -> Option<&CollocationEnsemble> {
        self.ensembles.iter().find(|(r, _)| *r == rule).map(|(_, e)| e)
    }

    /// Every CSV artifact, named `{id}_{method}_{kind}-{component}_{L}.csv`.
    pub fn artifacts(&self) -> Result<Vec<(String, Table)>> {
        let xs = self.grid.centers();
        let mut out = Vec::new();
        for r in &self.results {
            let tag = r.method.tag();
            for (k, name) in r.moments.names.iter().enumerate() {
                let file = |kind: &str| artifact_name(&self.plan.id, tag, &format!("{kind}-{name}"), self.plan.points);
                out.push((file("moments"), moments_table(&xs, &r.moments.moments[k])?));
                if let Some(slice) = r.slices.get(k) {
                    out.push((file("slice"), slice_table(&self.xi_grid, slice)?));
                }
                if let Some(surfaces) = &r.surfaces {
                    out.push((file("surface"), surface_table(&xs, &self.xi_grid, &surfaces[k])?));
                }
            }
        }
        Ok(out)
    }

    /// Run metadata, including the snapped probe, as TOML.
    pub fn manifest(&self, files: Vec<String>) -> Result<String> {
        let manifest = Manifest {
            example: &self.plan.id,
            model: &self.plan.model,
            points: self.plan.points,
            x_min: self.grid.x_min(),
            x_max: self.grid.x_max(),
            n_cells: self.grid.n_cells(),
            dx: self.grid.dx(),
            final_time: self.plan.solver.final_time,
            cfl: self.plan.solver.cfl,
            minmod_theta: self.plan.solver.minmod_theta,
            xi_grid_points: self.xi_grid.len(),
            probe: self.probe,
            gauss_nodes: self.ensemble(NodeRule::Gauss).map(|e| e.nodes.as_slice()),
            uniform_nodes: self.ensemble(NodeRule::Uniform).map(|e| e.nodes.as_slice()),
            files,
        };
        toml::to_string(&manifest).map_err(|e| Error::Config(e.to_string()))
    }

    /// Writes every artifact plus `{id}_manifest_{L}.toml` into `dir` and returns the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let artifacts = self.artifacts()?;
        let mut paths = Vec::new();
        for (name, table) in &artifacts {
            let path = dir.join(name);
            table.write(&path)?;
            paths.push(path);
        }
        let manifest = self.manifest(artifacts.into_iter().map(|(n, _)| n).collect())?;
        let path = dir.join(format!("{}_manifest_{}.toml", self.plan.id, self.plan.points));
        std::fs::write(&path, manifest).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        paths.push(path);
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        assert_eq!(burgers_exact(0.9, 0.5, 0.0, Orientation::Shock), 1.0);
        assert_eq!(burgers_exact(0.7, 0.5, 0.0, Orientation::Shock), 2.0);
        assert!((burgers_exact(0.734, 0.5, -1.0, Orientation::AsPrinted) - 1.668).abs() < 1e-12);
        for xi in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            for x in [-0.5, 0.05, 0.2] {
                let (l, r) = Orientation::Shock.states();
                let expected = if x < 0.1 * xi { l } else { r };
                assert_eq!(burgers_exact(x, 0.0, xi, Orientation::Shock), expected);
                let (l, r) = Orientation::AsPrinted.states();
                let expected = if x < 0.1 * xi { l } else { r };
                assert_eq!(burgers_exact(x, 0.0, xi, Orientation::AsPrinted), expected);
            }
        }
    }

    #[test]
    fn shock_slice_jumps_at_documented_xi() {
        let f = |xi| burgers_exact(0.734, 0.5, xi, Orientation::Shock);
        assert_eq!(f(-0.17), 1.0);
        assert_eq!(f(-0.15), 2.0);
        let g = |xi: f64| burgers_exact(0.734, 0.5, xi, Orientation::AsPrinted);
        for xi in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            assert!((g(xi) - (0.734 - 0.1 * xi) / 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_moments_match_closed_form() {
        let oracle = BurgersRiemannOracle::example1(Orientation::Shock);
        let m = oracle.moments(0.734, 0.5);
        assert!((m.mean - 1.58).abs() < 1e-12);
        assert!((m.stddev - 0.493558).abs() < 1e-6);
        for x in [-1.0f64, 0.0, 0.6, 0.65, 0.7, 0.8, 0.85, 0.9, 1.0] {
            let p: f64 = ((0.85 - x) / 0.2).clamp(0.0, 1.0);
            let m = oracle.moments(x, 0.5);
            assert!((m.mean - (1.0 + p)).abs() < 1e-12, "x = {x}");
            assert!((m.variance - p * (1.0 - p)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn rarefaction_moments() {
        let oracle = BurgersRiemannOracle::example1(Orientation::AsPrinted);
        let m = oracle.moments(0.734, 0.5);
        // (x - 0.1 xi) / 0.5 is linear in xi: mean 1.468, variance 0.2^2 / 3
        assert!((m.mean - 1.468).abs() < 1e-12);
        assert!((m.variance - 0.04 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn snapshot_of_constant_state() {
        let mut config = RunConfig::burgers_default();
        config.grid.n_cells = 20;
        config.model = ModelSpec::BurgersRiemann {
            u_left: 1.0,
            u_right: 1.0,
            jump_at: 0.0,
            jump_slope: 0.1,
        };
        let t = snapshot(&config, 0.3).unwrap();
        assert_eq!(t.header, vec!["x", "u"]);
        assert_eq!(t.rows.len(), 20);
        assert!(t.column("u").unwrap().iter().all(|&u| u == 1.0));
        assert!(snapshot(&config, 1.5).is_err());
    }

    #[test]
    fn presets_pass_selftest() {
        let lines = preset_selftest().unwrap();
        assert!(lines.iter().all(|l| l.starts_with("ok ")));
    }

    #[test]
    fn probes_snap_to_centers() {
        let g1 = example1(Orientation::Shock).grid.build().unwrap();
        let p = Probe::snap(&g1, EXAMPLE1_PROBE).unwrap();
        assert_eq!(p.cell, 1387);
        assert!((p.center - 0.734375).abs() < 1e-15);
        let g2 = example2(16).unwrap().grid.build().unwrap();
        let p = Probe::snap(&g2, EXAMPLE2_PROBE).unwrap();
        assert_eq!(p.cell, 677);
        assert!((p.center - 0.69375).abs() < 1e-15);
    }

    #[test]
    fn small_study_writes_named_artifacts() {
        let mut plan = example2(16).unwrap();
        plan.grid.n_cells = 40;
        plan.solver.final_time = 0.05;
        plan.surface_points = 5;
        let study = run_study(&plan).unwrap();
        let names: Vec<_> = study.artifacts().unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names.len(), 3 * 2 * 3);
        assert!(names.contains(&"example2_sp_spline_moments-w_16.csv".to_string()));
        assert!(names.contains(&"example2_gpc_surface-hu_16.csv".to_string()));
        assert!(names.contains(&"example2_cubic_slice-w_16.csv".to_string()));
        let dir = std::env::temp_dir().join(format!("stochcol-study-{}", std::process::id()));
        let paths = study.write(&dir).unwrap();
        let manifest = std::fs::read_to_string(paths.last().unwrap()).unwrap();
        assert!(manifest.contains("center = "));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
