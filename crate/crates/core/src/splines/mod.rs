//! Interpolation in random space: the shape-preserving rational quartic spline and an
//! interpolating cubic spline.

mod cubic;
mod rational;
mod tension;

pub use cubic::CubicSpline;
pub use rational::{KnotData, SpSpline};
pub use tension::{audit, select_tension, ShapeGoal, Tension, AUDIT_POINTS, MAX_ESCALATIONS};

use crate::error::{Error, Result};

/// Common evaluation surface for both spline kinds.
pub trait Interpolant {
    fn knots(&self) -> &[f64];

    fn eval(&self, xi: f64) -> Result<f64>;

    /// Index `l` of the interval `[knots[l], knots[l+1]]` holding `xi`; knot hits resolve
    /// to the interval on their right, except the last knot.
    fn locate(&self, xi: f64) -> Result<usize> {
        locate(self.knots(), xi)
    }
}

pub(crate) fn locate(knots: &[f64], xi: f64) -> Result<usize> {
    let (first, last) = (knots[0], knots[knots.len() - 1]);
    if !(first..=last).contains(&xi) {
        return Err(Error::OutOfRange(format!(
            "xi = {xi} outside spline span [{first}, {last}]"
        )));
    }
    let upper = knots.partition_point(|&k| k <= xi);
    Ok(upper.saturating_sub(1).min(knots.len() - 2))
}

pub(crate) fn check_knots(knots: &[f64], values: &[f64], min_len: usize) -> Result<()> {
    if knots.len() != values.len() {
        return Err(Error::Spline(format!(
            "{} knots but {} values",
            knots.len(),
            values.len()
        )));
    }
    if knots.len() < min_len {
        return Err(Error::Spline(format!(
            "need at least {min_len} knots, got {}",
            knots.len()
        )));
    }
    if knots.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::Spline("knots and values must be finite".into()));
    }
    if knots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Spline("knots must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_resolves_knot_hits_right() {
        let k = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(locate(&k, 0.0).unwrap(), 0);
        assert_eq!(locate(&k, 0.5).unwrap(), 0);
        assert_eq!(locate(&k, 1.0).unwrap(), 1);
        assert_eq!(locate(&k, 2.999).unwrap(), 2);
        assert_eq!(locate(&k, 3.0).unwrap(), 2);
        assert!(locate(&k, -0.1).is_err());
        assert!(locate(&k, 3.1).is_err());
    }

    #[test]
    fn knot_validation() {
        assert!(check_knots(&[0.0, 1.0, 2.0], &[1.0, 2.0, 3.0], 3).is_ok());
        assert!(check_knots(&[0.0, 1.0], &[1.0, 2.0], 3).is_err());
        assert!(check_knots(&[0.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 3).is_err());
        assert!(check_knots(&[0.0, 2.0, 1.0], &[1.0, 2.0, 3.0], 3).is_err());
        assert!(check_knots(&[0.0, 1.0, 2.0], &[1.0, f64::NAN, 3.0], 3).is_err());
        assert!(check_knots(&[0.0, 1.0, 2.0], &[1.0, 2.0], 2).is_err());
    }
}
