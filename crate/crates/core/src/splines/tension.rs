//! Tension selection for the rational spline.
//!
//! Each goal starts from closed-form defaults and is then checked by a sampling audit
//! on every interval. Intervals that fail get their knot `mu` values escalated
//! (`mu <- 2 mu + 1`) until the audit passes or the escalation budget runs out.
//!
//! With `lambda = 0` the correction term obeys
//! `|S - chord| <= h max(|A|, |B|) s t / (1 + s t mu_min) <= h max(|A|, |B|) / mu_min`,
//! which gives the closed forms below.

use serde::{Deserialize, Serialize};

use super::rational::KnotData;
use crate::error::{Error, Result};

/// Samples per interval, ends included.
pub const AUDIT_POINTS: usize = 101;

pub const MAX_ESCALATIONS: usize = 60;

/// Relative tolerance (against the largest |value|) for range and flatness checks.
const REL_TOL: f64 = 1e-13;

/// Intervals whose rise is below this fraction of the data scale count as flat.
const FLAT_REL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeGoal {
    /// Intervals with positive end values stay non-negative.
    Positivity,
    /// Each interval is monotone in the direction of its data and stays within its end
    /// values; flat intervals stay flat to round-off.
    Monotonicity,
    /// Intervals with convex (concave) data stay convex (concave).
    Convexity,
    /// No shape constraint: zero tension.
    C2,
}

impl ShapeGoal {
    pub const ALL: [ShapeGoal; 4] = [
        ShapeGoal::Positivity,
        ShapeGoal::Monotonicity,
        ShapeGoal::Convexity,
        ShapeGoal::C2,
    ];
}

/// `lambda` per interval and `mu` per knot.
#[derive(Clone, Debug, PartialEq)]
pub struct Tension {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl Tension {
    pub fn zeros(n_knots: usize) -> Self {
        Self {
            lambda: vec![0.0; n_knots.saturating_sub(1)],
            mu: vec![0.0; n_knots],
        }
    }

    /// Checks shapes and signs, and that `Q > 0` on every interval. With
    /// `Q = 1 + s t (s a + t b)` and `s t <= 1/4`, `min(a, b) > -4` is sufficient.
    pub fn validate(&self, data: &KnotData) -> Result<()> {
        let n = data.knots().len();
        if self.lambda.len() != n - 1 || self.mu.len() != n {
            return Err(Error::Spline(format!(
                "tension shape ({}, {}) does not match {n} knots",
                self.lambda.len(),
                self.mu.len()
            )));
        }
        if self
            .lambda
            .iter()
            .chain(&self.mu)
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::Spline(
                "tension parameters must be finite and non-negative".into(),
            ));
        }
        for l in 0..n - 1 {
            let (a, b) = (data.a()[l], data.b()[l]);
            let left = b * self.lambda[l] + self.mu[l];
            let right = a * self.lambda[l] + self.mu[l + 1];
            if left.min(right) <= -4.0 {
                return Err(Error::Spline(format!(
                    "tension on interval {l} lets the denominator vanish"
                )));
            }
        }
        Ok(())
    }
}

fn scale(data: &KnotData) -> f64 {
    data.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn knot_slopes(data: &KnotData, l: usize) -> (f64, f64) {
    let d = data.chord(l);
    (d - data.a()[l], d + data.b()[l])
}

fn is_flat(data: &KnotData, l: usize, scale: f64) -> bool {
    let v = data.values();
    (v[l + 1] - v[l]).abs() <= FLAT_REL * scale
}

fn raise(mu: &mut [f64], l: usize, floor: f64) {
    mu[l] = mu[l].max(floor);
    mu[l + 1] = mu[l + 1].max(floor);
}

fn defaults(data: &KnotData, goal: ShapeGoal) -> Tension {
    let n = data.knots().len();
    let mut t = Tension::zeros(n);
    let v = data.values();
    let scale = scale(data);
    match goal {
        ShapeGoal::C2 | ShapeGoal::Convexity => {}
        ShapeGoal::Positivity => {
            for l in 0..n - 1 {
                let m = v[l].min(v[l + 1]);
                let bulge = data.a()[l].max(data.b()[l]).max(0.0);
                if m > 0.0 && bulge > 0.0 {
                    raise(&mut t.mu, l, data.spacing()[l] * bulge / m);
                }
            }
        }
        ShapeGoal::Monotonicity => {
            let tol = REL_TOL * scale;
            for l in 0..n - 1 {
                let d = data.chord(l);
                let (left, right) = knot_slopes(data, l);
                let compatible = !is_flat(data, l, scale) && left * d >= 0.0 && right * d >= 0.0;
                let m = data.a()[l].abs().max(data.b()[l].abs());
                if !compatible && m > 0.0 {
                    // the knot slopes point the wrong way, so no tension makes this
                    // interval monotone; squeeze the correction below round-off instead
                    raise(&mut t.mu, l, 2.0 * data.spacing()[l] * m / tol);
                }
            }
        }
    }
    t
}

/// Intervals on which `tension` violates `goal` at the audit samples.
pub fn audit(data: &KnotData, tension: &Tension, goal: ShapeGoal) -> Vec<usize> {
    let v = data.values();
    let scale = scale(data);
    let tol = REL_TOL * scale;
    let samples = |l: usize| -> Vec<f64> {
        (0..AUDIT_POINTS)
            .map(|i| {
                let t = i as f64 / (AUDIT_POINTS - 1) as f64;
                data.eval_local(tension, l, t)
            })
            .collect()
    };
    (0..data.intervals())
        .filter(|&l| {
            let s = samples(l);
            if s.iter().any(|x| !x.is_finite()) {
                return true;
            }
            match goal {
                ShapeGoal::C2 => false,
                ShapeGoal::Positivity => v[l] > 0.0 && v[l + 1] > 0.0 && s.iter().any(|&x| x < 0.0),
                ShapeGoal::Monotonicity => {
                    let (lo, hi) = (v[l].min(v[l + 1]) - tol, v[l].max(v[l + 1]) + tol);
                    let out_of_range = s.iter().any(|&x| x < lo || x > hi);
                    let dir = (v[l + 1] - v[l]).signum();
                    let reversed = !is_flat(data, l, scale)
                        && s.windows(2).any(|w| dir * (w[1] - w[0]) < 0.0);
                    out_of_range || reversed
                }
                ShapeGoal::Convexity => {
                    let (a, b) = (data.a()[l], data.b()[l]);
                    let sign = if a >= 0.0 && b >= 0.0 {
                        1.0
                    } else if a <= 0.0 && b <= 0.0 {
                        -1.0
                    } else {
                        return false;
                    };
                    s.windows(3)
                        .any(|w| sign * (w[2] - 2.0 * w[1] + w[0]) < -tol)
                }
            }
        })
        .collect()
}

/// Chooses tension for `goal`, escalating `mu` on failing intervals.
pub fn select_tension(data: &KnotData, goal: ShapeGoal) -> Result<Tension> {
    let mut tension = defaults(data, goal);
    for _ in 0..MAX_ESCALATIONS {
        let failing = audit(data, &tension, goal);
        if failing.is_empty() {
            return Ok(tension);
        }
        let mut bumped = vec![false; tension.mu.len()];
        for l in failing {
            bumped[l] = true;
            bumped[l + 1] = true;
        }
        for (mu, _) in tension.mu.iter_mut().zip(&bumped).filter(|(_, &b)| b) {
            *mu = 2.0 * *mu + 1.0;
        }
    }
    let failing = audit(data, &tension, goal);
    if failing.is_empty() {
        Ok(tension)
    } else {
        Err(Error::Spline(format!(
            "{goal:?} audit still fails on intervals {failing:?} after {MAX_ESCALATIONS} escalations"
        )))
    }
}
