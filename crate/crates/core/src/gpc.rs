//! Generalized polynomial chaos on the uniform measure: orthonormal Legendre basis,
//! discrete transform of nodal data and moments from the coefficients.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, legendre};

/// `Phi_i = sqrt(2i+1) P_i`, orthonormal against the density 1/2 on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthonormalBasis {
    degree: usize,
}

impl OrthonormalBasis {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phi(&self, i: usize, xi: f64) -> f64 {
        ((2 * i + 1) as f64).sqrt() * legendre(i, xi)
    }

    /// `Phi_0(xi) ..= Phi_N(xi)` in one recurrence sweep.
    pub fn eval_all(&self, xi: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let (mut p_prev, mut p) = (1.0, xi);
        out.push(1.0);
        if self.degree >= 1 {
            out.push(3f64.sqrt() * xi);
        }
        for k in 1..self.degree {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0) * xi * p - kf * p_prev) / (kf + 1.0);
            p_prev = p;
            p = next;
            out.push(((2 * k + 3) as f64).sqrt() * p);
        }
        out
    }
}

/// Collocation rule for gPC: Gauss–Legendre nodes with density-scaled weights.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(points: usize) -> Result<Self> {
        let (nodes, weights) = gauss_legendre(points)?;
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Basis whose degree matches this rule (`N = L - 1`).
    pub fn matching_basis(&self) -> OrthonormalBasis {
        OrthonormalBasis::new(self.len() - 1)
    }
}

/// Coefficients `U_0 ..= U_N` of one scalar expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct GpcExpansion {
    basis: OrthonormalBasis,
    coefficients: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub stddev: f64,
}

impl Moments {
    /// Clamps tiny negative variance produced by cancellation.
    pub fn from_mean_variance(mean: f64, variance: f64) -> Self {
        let variance = variance.max(0.0);
        Self {
            mean,
            variance,
            stddev: variance.sqrt(),
        }
    }
}

impl GpcExpansion {
    pub fn from_coefficients(basis: OrthonormalBasis, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != basis.len() {
            return Err(Error::Gpc(format!(
                "{} coefficients for a degree-{} basis",
                coefficients.len(),
                basis.degree()
            )));
        }
        Ok(Self {
            basis,
            coefficients,
        })
    }

    /// Discrete transform `U_i = sum_l U(xi_l) Phi_i(xi_l) w_l`.
    pub fn transform(values: &[f64], rule: &GaussRule, basis: OrthonormalBasis) -> Result<Self> {
        if rule.len() != basis.len() || values.len() != rule.len() {
            return Err(Error::Gpc(format!(
                "need L = N + 1: {} values, {} nodes, degree {}",
                values.len(),
                rule.len(),
                basis.degree()
            )));
        }
        let mut coefficients = vec![0.0; basis.len()];
        for ((&xi, &w), &u) in rule.nodes.iter().zip(&rule.weights).zip(values) {
            for (c, phi) in coefficients.iter_mut().zip(basis.eval_all(xi)) {
                *c += u * phi * w;
            }
        }
        Ok(Self {
            basis,
            coefficients,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn basis(&self) -> OrthonormalBasis {
        self.basis
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::OutOfRange(format!("xi = {xi} outside [-1, 1]")));
        }
        Ok(self
            .basis
            .eval_all(xi)
            .iter()
            .zip(&self.coefficients)
            .map(|(p, c)| p * c)
            .sum())
    }

    pub fn moments(&self) -> Moments {
        let mean = self.coefficients[0];
        let variance = self.coefficients[1..].iter().map(|c| c * c).sum();
        Moments::from_mean_variance(mean, variance)
    }
}
