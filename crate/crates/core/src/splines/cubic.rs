//! Interpolating cubic spline with not-a-knot end conditions.

use super::{check_knots, locate, Interpolant};
use crate::error::Result;

/// Piecewise cubic Hermite form: values and first derivatives at the knots.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: &[f64], values: &[f64]) -> Result<Self> {
        check_knots(knots, values, 4)?;
        let n = knots.len();
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = values
            .windows(2)
            .zip(&h)
            .map(|(v, h)| (v[1] - v[0]) / h)
            .collect();

        // tridiagonal system for knot slopes
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h[i];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i - 1];
            rhs[i] = 3.0 * (h[i] * d[i - 1] + h[i - 1] * d[i]);
        }
        // not-a-knot: third derivative continuous across the second and penultimate knots
        let w0 = h[0] + h[1];
        diag[0] = h[1];
        sup[0] = w0;
        rhs[0] = ((h[0] + 2.0 * w0) * h[1] * d[0] + h[0] * h[0] * d[1]) / w0;
        let (hl, hp) = (h[n - 2], h[n - 3]);
        let wn = hl + hp;
        sub[n - 1] = wn;
        diag[n - 1] = hp;
        rhs[n - 1] = (hl * hl * d[n - 3] + (2.0 * wn + hl) * hp * d[n - 2]) / wn;

        let slopes = solve_tridiagonal(&sub, &diag, &sup, rhs);
        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            slopes,
        })
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = sup[0] / beta;
    rhs[0] /= beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        if i < n - 1 {
            c[i] = sup[i] / beta;
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

impl Interpolant for CubicSpline {
    fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn eval(&self, xi: f64) -> Result<f64> {
        let l = locate(&self.knots, xi)?;
        let h = self.knots[l + 1] - self.knots[l];
        let t = (xi - self.knots[l]) / h;
        if t == 0.0 {
            return Ok(self.values[l]);
        }
        if t == 1.0 {
            return Ok(self.values[l + 1]);
        }
        let (y0, y1) = (self.values[l], self.values[l + 1]);
        let (m0, m1) = (self.slopes[l] * h, self.slopes[l + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics() {
        let knots: Vec<f64> = (0..8).map(|i| -1.0 + 2.0 * i as f64 / 7.0).collect();
        let p = |x: f64| x * x * x;
        let vals: Vec<f64> = knots.iter().map(|&x| p(x)).collect();
        let s = CubicSpline::new(&knots, &vals).unwrap();
        for i in 0..=1000 {
            let x = -1.0 + 2.0 * i as f64 / 1000.0;
            assert!((s.eval(x).unwrap() - p(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_cubics_on_uneven_knots() {
        let knots = [-1.0, -0.7, -0.1, 0.05, 0.5, 1.0];
        let p = |x: f64| 2.0 - x + 0.5 * x * x - 3.0 * x * x * x;
        let vals: Vec<f64> = knots.iter().map(|&x| p(x)).collect();
        let s = CubicSpline::new(&knots, &vals).unwrap();
        for i in 0..=500 {
            let x = -1.0 + 2.0 * i as f64 / 500.0;
            assert!((s.eval(x).unwrap() - p(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn four_knots_is_one_cubic() {
        let knots = [0.0, 1.0, 2.0, 3.0];
        let vals = [1.0, 0.0, 4.0, -2.0];
        let s = CubicSpline::new(&knots, &vals).unwrap();
        for (k, v) in knots.iter().zip(&vals) {
            assert_eq!(s.eval(*k).unwrap(), *v);
        }
    }

    #[test]
    fn constant_data() {
        let s = CubicSpline::new(&[0.0, 1.0, 2.0, 3.0, 4.0], &[2.0; 5]).unwrap();
        for i in 0..=40 {
            assert!((s.eval(0.1 * i as f64).unwrap() - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn step_data_overshoots() {
        let knots = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let s = CubicSpline::new(&knots, &[1.0, 1.0, 1.0, 2.0, 2.0, 2.0]).unwrap();
        let samples: Vec<f64> = (0..=500).map(|i| s.eval(i as f64 * 0.01).unwrap()).collect();
        let lo = samples.iter().cloned().fold(f64::MAX, f64::min);
        let hi = samples.iter().cloned().fold(f64::MIN, f64::max);
        assert!(lo < 1.0 - 1e-3 && hi > 2.0 + 1e-3, "{lo} {hi}");
    }

    #[test]
    fn too_few_knots() {
        assert!(CubicSpline::new(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).is_err());
    }
}
