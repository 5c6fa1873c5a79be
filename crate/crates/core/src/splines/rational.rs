//! Rational quartic interpolating spline with local tension.
//!
//! On `[xi_l, xi_{l+1}]`, with `t = (xi - xi_l) / h_l` and `s = 1 - t`,
//!
//! ```text
//! S = s U_l + t U_{l+1} - h_l s t [s^2 A_l + lambda_l s t A_l B_l + t^2 B_l] / Q_l
//! Q_l = 1 + s t [s (B_l lambda_l + mu_l) + t (A_l lambda_l + mu_{l+1})]
//! ```
//!
//! `A_l`, `B_l` are scaled second divided differences, so the knot slopes are
//! `D_l - A_l` and `D_l + B_l` (with `D_l` the chord slope) whatever the tension.
//! Both one-sided second derivatives at an interior knot equal `2 delta (3 + mu)`,
//! which makes the interpolant C2 for any non-negative tension. `mu` is therefore
//! carried per knot and `lambda` per interval.
//!
//! The `lambda` term multiplies the product `A_l B_l`. When `A_l` and `B_l` differ in
//! sign a large `lambda` does not pull the curve towards the chord, so the built-in
//! strategies leave `lambda` at zero and act through `mu` only.

use super::tension::{select_tension, ShapeGoal, Tension};
use super::{check_knots, locate, Interpolant};
use crate::error::{Error, Result};

/// Knots, values and the derived difference quantities of the rational spline.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotData {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// `h_l = xi_{l+1} - xi_l`
    spacing: Vec<f64>,
    /// `delta` at interior knots; the two end entries are zero and unused.
    delta: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl KnotData {
    pub fn new(knots: &[f64], values: &[f64]) -> Result<Self> {
        check_knots(knots, values, 3)?;
        let n = knots.len();
        let spacing: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = values
            .windows(2)
            .zip(&spacing)
            .map(|(v, h)| (v[1] - v[0]) / h)
            .collect();
        let mut delta = vec![0.0; n];
        for i in 1..n - 1 {
            delta[i] = (slope[i] - slope[i - 1]) / (spacing[i] + spacing[i - 1]);
        }
        let last = n - 2;
        let a = (0..=last)
            .map(|l| spacing[l] * if l == 0 { delta[1] } else { delta[l] })
            .collect();
        let b = (0..=last)
            .map(|l| spacing[l] * if l == last { delta[last] } else { delta[l + 1] })
            .collect();
        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            spacing,
            delta,
            a,
            b,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn intervals(&self) -> usize {
        self.spacing.len()
    }

    /// Chord slope of interval `l`.
    pub fn chord(&self, l: usize) -> f64 {
        (self.values[l + 1] - self.values[l]) / self.spacing[l]
    }

    /// Evaluates interval `l` at local coordinate `t` in `[0, 1]`.
    pub(crate) fn eval_local(&self, tension: &Tension, l: usize, t: f64) -> f64 {
        let s = 1.0 - t;
        let (a, b) = (self.a[l], self.b[l]);
        let lambda = tension.lambda[l];
        let (mu_l, mu_r) = (tension.mu[l], tension.mu[l + 1]);
        let st = s * t;
        let numer = s * s * a + lambda * st * a * b + t * t * b;
        let q = 1.0 + st * (s * (b * lambda + mu_l) + t * (a * lambda + mu_r));
        s * self.values[l] + t * self.values[l + 1] - self.spacing[l] * st * numer / q
    }
}

/// Shape-preserving rational spline over one slice of nodal data.
#[derive(Clone, Debug, PartialEq)]
pub struct SpSpline {
    data: KnotData,
    tension: Tension,
    goal: Option<ShapeGoal>,
}

impl SpSpline {
    /// Builds the spline with tension chosen for `goal`.
    pub fn new(knots: &[f64], values: &[f64], goal: ShapeGoal) -> Result<Self> {
        let data = KnotData::new(knots, values)?;
        let tension = select_tension(&data, goal)?;
        Ok(Self {
            data,
            tension,
            goal: Some(goal),
        })
    }

    /// Builds the spline with caller-supplied tension. Rejects tension for which the
    /// denominator could vanish.
    pub fn with_tension(knots: &[f64], values: &[f64], tension: Tension) -> Result<Self> {
        let data = KnotData::new(knots, values)?;
        tension.validate(&data)?;
        Ok(Self {
            data,
            tension,
            goal: None,
        })
    }

    pub fn data(&self) -> &KnotData {
        &self.data
    }

    pub fn tension(&self) -> &Tension {
        &self.tension
    }

    pub fn goal(&self) -> Option<ShapeGoal> {
        self.goal
    }

    /// Samples interval `l` at `points` equally spaced local coordinates, ends included.
    pub fn sample_interval(&self, l: usize, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| {
                let t = i as f64 / (points - 1) as f64;
                self.data.eval_local(&self.tension, l, t)
            })
            .collect()
    }
}

impl Interpolant for SpSpline {
    fn knots(&self) -> &[f64] {
        &self.data.knots
    }

    fn eval(&self, xi: f64) -> Result<f64> {
        let l = locate(&self.data.knots, xi)?;
        let t = (xi - self.data.knots[l]) / self.data.spacing[l];
        // pin knot hits so rounding in t cannot perturb the nodal value
        if t == 0.0 {
            return Ok(self.data.values[l]);
        }
        if t == 1.0 {
            return Ok(self.data.values[l + 1]);
        }
        let v = self.data.eval_local(&self.tension, l, t);
        if !v.is_finite() {
            return Err(Error::Spline(format!("non-finite value at xi = {xi}")));
        }
        Ok(v)
    }
}
