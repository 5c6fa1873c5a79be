//! Non-intrusive collocation pipeline: deterministic solves at every node, per-cell
//! slices in `xi`, interpolation and moments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::{solve, Observable, SolverSettings};
use crate::gpc::{GaussRule, GpcExpansion, Moments};
use crate::mesh::{Grid1D, StateField};
use crate::models::Realization;
use crate::quadrature::{gauss_legendre, integrate};
use crate::random::RandomSpace;
use crate::splines::{CubicSpline, Interpolant, ShapeGoal, SpSpline};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRule {
    /// Gauss–Legendre roots with density-scaled weights.
    Gauss,
    /// Equally spaced over the support, endpoints included.
    Uniform,
}

/// Collocation nodes (increasing) and, for Gauss rules, their weights.
pub fn collocation_nodes(rule: NodeRule, points: usize) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    match rule {
        NodeRule::Gauss => {
            let r = GaussRule::new(points)?;
            Ok((r.nodes, Some(r.weights)))
        }
        NodeRule::Uniform => {
            if points < 2 {
                return Err(Error::Config(format!(
                    "uniform nodes need at least 2 points, got {points}"
                )));
            }
            let last = (points - 1) as f64;
            Ok((
                (0..points)
                    .map(|i| -1.0 + 2.0 * i as f64 / last)
                    .collect(),
                None,
            ))
        }
    }
}

/// Final states at every collocation node.
#[derive(Clone, Debug)]
pub struct CollocationEnsemble {
    pub nodes: Vec<f64>,
    pub weights: Option<Vec<f64>>,
    pub states: Vec<StateField>,
    /// Observables of each realization, node-major.
    pub observables: Vec<Vec<Observable>>,
    pub random_space: RandomSpace,
}

impl CollocationEnsemble {
    /// Checks the structural invariants and wraps the data.
    pub fn new(
        nodes: Vec<f64>,
        weights: Option<Vec<f64>>,
        states: Vec<StateField>,
        observables: Vec<Vec<Observable>>,
    ) -> Result<Self> {
        let random_space = RandomSpace::uniform();
        if nodes.is_empty() || nodes.len() != states.len() || nodes.len() != observables.len() {
            return Err(Error::Config("ensemble sizes disagree".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) || !nodes.iter().all(|&x| random_space.contains(x)) {
            return Err(Error::Config(
                "nodes must be strictly increasing inside the support".into(),
            ));
        }
        if let Some(w) = &weights {
            let total: f64 = w.iter().sum();
            if w.len() != nodes.len() || (total - 1.0).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "weights must match nodes and sum to one (sum = {total})"
                )));
            }
        }
        let (grid, m) = (*states[0].grid(), states[0].components());
        if states.iter().any(|s| *s.grid() != grid || s.components() != m) {
            return Err(Error::Config("states do not share one grid".into()));
        }
        let names: Vec<_> = observables[0].iter().map(|o| o.name).collect();
        if observables
            .iter()
            .any(|obs| obs.iter().map(|o| o.name).ne(names.iter().copied()))
        {
            return Err(Error::Config("realizations report different observables".into()));
        }
        Ok(Self {
            nodes,
            weights,
            states,
            observables,
            random_space,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn grid(&self) -> &Grid1D {
        self.states[0].grid()
    }

    pub fn observable_names(&self) -> Vec<&'static str> {
        self.observables[0].iter().map(|o| o.name).collect()
    }

    pub fn observable_index(&self, name: &str) -> Option<usize> {
        self.observables[0].iter().position(|o| o.name == name)
    }

    /// Nodal values of observable `component` at spatial cell `cell`, in node order.
    pub fn slice(&self, cell: usize, component: usize) -> Result<XiSlice> {
        let n = self.grid().n_cells();
        let m = self.observables[0].len();
        if cell >= n || component >= m {
            return Err(Error::OutOfRange(format!(
                "slice (cell {cell}, component {component}) of {n} cells x {m} observables"
            )));
        }
        Ok(XiSlice {
            cell,
            component,
            values: self
                .observables
                .iter()
                .map(|obs| obs[component].values[cell])
                .collect(),
        })
    }
}

/// One spatial cell's values across the collocation nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct XiSlice {
    pub cell: usize,
    pub component: usize,
    pub values: Vec<f64>,
}

/// Solves every realization to the final time. Uses the ambient rayon pool; result
/// order follows `nodes` whatever the scheduling.
pub fn run_ensemble<F>(
    settings: &SolverSettings,
    nodes: &[f64],
    weights: Option<Vec<f64>>,
    factory: F,
) -> Result<CollocationEnsemble>
where
    F: Fn(f64) -> Result<Realization> + Sync,
{
    settings.validate()?;
    let solved: Vec<(StateField, Vec<Observable>)> = nodes
        .par_iter()
        .map(|&xi| {
            let run = || -> Result<_> {
                let Realization { model, initial } = factory(xi)?;
                let state = solve(settings, model.as_ref(), initial)?;
                let obs = model.observables(&state);
                Ok((state, obs))
            };
            run().map_err(|e| Error::Realization {
                xi,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let (states, observables) = solved.into_iter().unzip();
    CollocationEnsemble::new(nodes.to_vec(), weights, states, observables)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplineKind {
    Cubic,
    ShapePreserving,
}

/// Interpolation method in random space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Gpc,
    Cubic,
    SpSpline(ShapeGoal),
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Gpc => "gpc",
            Method::Cubic => "cubic",
            Method::SpSpline(_) => "sp_spline",
        }
    }

    pub fn spline(kind: SplineKind, goal: ShapeGoal) -> Self {
        match kind {
            SplineKind::Cubic => Method::Cubic,
            SplineKind::ShapePreserving => Method::SpSpline(goal),
        }
    }
}

/// Interpolant of one slice.
#[derive(Clone, Debug)]
pub enum SliceInterpolant {
    Gpc(GpcExpansion),
    Cubic(CubicSpline),
    Sp(SpSpline),
}

impl SliceInterpolant {
    pub fn build(method: Method, nodes: &[f64], weights: Option<&[f64]>, values: &[f64]) -> Result<Self> {
        Ok(match method {
            Method::Gpc => {
                let weights = weights.ok_or_else(|| {
                    Error::Gpc("gPC needs Gauss nodes with quadrature weights".into())
                })?;
                let rule = GaussRule {
                    nodes: nodes.to_vec(),
                    weights: weights.to_vec(),
                };
                SliceInterpolant::Gpc(GpcExpansion::transform(values, &rule, rule.matching_basis())?)
            }
            Method::Cubic => SliceInterpolant::Cubic(CubicSpline::new(nodes, values)?),
            Method::SpSpline(goal) => SliceInterpolant::Sp(SpSpline::new(nodes, values, goal)?),
        })
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        match self {
            SliceInterpolant::Gpc(e) => e.eval(xi),
            SliceInterpolant::Cubic(s) => s.eval(xi),
            SliceInterpolant::Sp(s) => s.eval(xi),
        }
    }

    /// Coefficient moments for gPC; per-interval Gauss quadrature against the uniform
    /// density for splines.
    pub fn moments(&self, quadrature_points: usize) -> Result<Moments> {
        let spline: &dyn Interpolant = match self {
            SliceInterpolant::Gpc(e) => return Ok(e.moments()),
            SliceInterpolant::Cubic(s) => s,
            SliceInterpolant::Sp(s) => s,
        };
        let knots = spline.knots();
        if knots[0] != -1.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::Spline(format!(
                "moments need knots spanning [-1, 1], got [{}, {}]",
                knots[0],
                knots[knots.len() - 1]
            )));
        }
        let rule = gauss_legendre(quadrature_points)?;
        let (mut mean, mut second) = (0.0, 0.0);
        for w in knots.windows(2) {
            let mut err = None;
            let mut f = |x: f64| match spline.eval(x) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            };
            mean += 0.5 * integrate(&rule, w[0], w[1], &mut f);
            second += 0.5 * integrate(&rule, w[0], w[1], |x| f(x).powi(2));
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(Moments::from_mean_variance(mean, second - mean * mean))
    }
}

/// Per-cell moments of every observable for one method.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentField {
    pub method: Method,
    pub names: Vec<&'static str>,
    /// `moments[component][cell]`
    pub moments: Vec<Vec<Moments>>,
    pub quadrature: String,
}

impl MomentField {
    pub fn component(&self, name: &str) -> Option<&[Moments]> {
        self.names
            .iter()
            .position(|&n| n == name)
            .map(|k| self.moments[k].as_slice())
    }

    pub fn means(&self, component: usize) -> Vec<f64> {
        self.moments[component].iter().map(|m| m.mean).collect()
    }

    pub fn stddevs(&self, component: usize) -> Vec<f64> {
        self.moments[component].iter().map(|m| m.stddev).collect()
    }
}

fn per_cell<T, F>(ensemble: &CollocationEnsemble, component: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&XiSlice) -> Result<T> + Sync,
{
    (0..ensemble.grid().n_cells())
        .into_par_iter()
        .map(|cell| {
            let slice = ensemble.slice(cell, component)?;
            f(&slice).map_err(|e| Error::AtCell {
                cell,
                component,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Interpolants for every cell of observable `component`.
pub fn interpolants(
    ensemble: &CollocationEnsemble,
    method: Method,
    component: usize,
) -> Result<Vec<SliceInterpolant>> {
    let weights = ensemble.weights.as_deref();
    per_cell(ensemble, component, |s| {
        SliceInterpolant::build(method, &ensemble.nodes, weights, &s.values)
    })
}

fn moments_with(ensemble: &CollocationEnsemble, method: Method, quadrature_points: usize) -> Result<MomentField> {
    let names = ensemble.observable_names();
    let weights = ensemble.weights.as_deref();
    let moments = (0..names.len())
        .map(|k| {
            per_cell(ensemble, k, |s| {
                SliceInterpolant::build(method, &ensemble.nodes, weights, &s.values)?
                    .moments(quadrature_points)
            })
        })
        .collect::<Result<_>>()?;
    let quadrature = match method {
        Method::Gpc => format!("gpc coefficients, {} Gauss nodes", ensemble.len()),
        _ => format!("{quadrature_points}-point Gauss-Legendre per knot interval"),
    };
    Ok(MomentField {
        method,
        names,
        moments,
        quadrature,
    })
}

/// Mean and variance from the gPC coefficients of every slice.
pub fn moments_from_gpc(ensemble: &CollocationEnsemble) -> Result<MomentField> {
    if ensemble.weights.is_none() {
        return Err(Error::Gpc("ensemble has no quadrature weights".into()));
    }
    moments_with(ensemble, Method::Gpc, 0)
}

/// Mean and variance by quadrature of the spline interpolant of every slice.
pub fn moments_from_spline(
    ensemble: &CollocationEnsemble,
    method: Method,
    quadrature_points: usize,
) -> Result<MomentField> {
    if method == Method::Gpc {
        return Err(Error::Config("moments_from_spline called with gPC".into()));
    }
    moments_with(ensemble, method, quadrature_points)
}

/// Values of every cell's interpolant on `xi_grid`: `out[cell][i]`.
pub fn surface(
    ensemble: &CollocationEnsemble,
    method: Method,
    component: usize,
    xi_grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let weights = ensemble.weights.as_deref();
    per_cell(ensemble, component, |s| {
        let interp = SliceInterpolant::build(method, &ensemble.nodes, weights, &s.values)?;
        xi_grid.iter().map(|&xi| interp.eval(xi)).collect()
    })
}

/// `points` equally spaced values on `[-1, 1]`.
pub fn xi_grid(points: usize) -> Vec<f64> {
    let last = (points.max(2) - 1) as f64;
    (0..points.max(2)).map(|i| -1.0 + 2.0 * i as f64 / last).collect()
}
